#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ccbench/artifact.hpp"
#include "ccbench/conceptual_space.hpp"

namespace ccbench {

/// Weights of the novelty and utility terms. All must be strictly positive.
struct MetricParams {
  double alpha_h = 1.0;
  double alpha_r = 1.0;
  double alpha_inc = 0.5;
  double alpha_exc = 0.5;

  void validate() const;
  bool operator==(const MetricParams&) const = default;
};

/// Failure kinds in precedence order; a failed output gets the first that applies.
enum class ErrorKind {
  malformed_output,
  hallucinated_node,
  hallucinated_edge,
  wrong_start,
  wrong_end,
  missing_inclusion,
  violated_exclusion,
};

inline constexpr std::array<ErrorKind, 7> kAllErrorKinds = {
    ErrorKind::malformed_output, ErrorKind::hallucinated_node, ErrorKind::hallucinated_edge,
    ErrorKind::wrong_start,      ErrorKind::wrong_end,         ErrorKind::missing_inclusion,
    ErrorKind::violated_exclusion,
};

/// Coarse families: malformed output and hallucinated nodes/edges are
/// hallucinations; endpoint and constraint failures are invalid paths.
enum class ErrorFamily { hallucination, invalid_path };

std::string_view to_string(ErrorKind kind);
std::string_view to_string(ErrorFamily family);
ErrorFamily family_of(ErrorKind kind);

struct ScoredResult {
  std::optional<CreativeArtifact> artifact;
  double utility = 0.0;
  double novelty = 0.0;
  double creativity = 0.0;
  std::optional<ErrorKind> error;

  bool success() const { return !error.has_value(); }
};

/// Mean of -ln w over the walk's labels. Throws DomainError on a
/// non-positive label probability.
double surprise(const CreativeArtifact& path, const LabelDistribution& dist);

/// alpha_h * h + alpha_r * surprise.
double novelty(const CreativeArtifact& path, const MetricParams& params,
               const LabelDistribution& dist);

/// (1 + alpha_inc |I|)(1 + alpha_exc |X|) when `path` satisfies x, else 0.
double utility(const CreativeArtifact& path, const CreativePrompt& x,
               const ConceptualSpace& space, const MetricParams& params);

/// Mean of utility * novelty. Throws ConfigError on an empty list.
double creativity_score(std::span<const ScoredResult> results);

/// Per level: mean novelty of successes over the mean novelty of successful
/// single-hop artifacts at the same level. Levels lacking either are nullopt.
std::map<int, std::optional<double>> normalized_novelty(
    const std::map<int, std::vector<ScoredResult>>& results_by_level);

/// As above with the denominator taken from `reference_by_level` (e.g. the
/// scored ground-truth paths) instead of the solver's own single-hop successes.
std::map<int, std::optional<double>> normalized_novelty(
    const std::map<int, std::vector<ScoredResult>>& results_by_level,
    const std::map<int, std::vector<ScoredResult>>& reference_by_level);

/// nullopt when the output satisfies x; otherwise the first applicable kind.
std::optional<ErrorKind> classify_error(std::string_view raw_output, const CreativePrompt& x,
                                        const ConceptualSpace& space, std::size_t max_hops);

/// Parses, classifies and scores one raw solver output.
ScoredResult score_output(std::string_view raw_output, const CreativePrompt& x,
                          const ConceptualSpace& space, const MetricParams& params,
                          std::size_t max_hops);

/// Scores an already-parsed artifact.
ScoredResult score_artifact(const CreativeArtifact& path, const CreativePrompt& x,
                            const ConceptualSpace& space, const MetricParams& params);

}  // namespace ccbench
