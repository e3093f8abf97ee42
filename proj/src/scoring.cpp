#include "ccbench/scoring.hpp"

#include <cmath>

#include "ccbench/error.hpp"

namespace ccbench {

void MetricParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string(name) + " must be positive and finite");
    }
  };
  positive(alpha_h, "alpha_h");
  positive(alpha_r, "alpha_r");
  positive(alpha_inc, "alpha_i");
  positive(alpha_exc, "alpha_x");
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_output: return "malformed_output";
    case ErrorKind::hallucinated_node: return "hallucinated_node";
    case ErrorKind::hallucinated_edge: return "hallucinated_edge";
    case ErrorKind::wrong_start: return "wrong_start";
    case ErrorKind::wrong_end: return "wrong_end";
    case ErrorKind::missing_inclusion: return "missing_inclusion";
    case ErrorKind::violated_exclusion: return "violated_exclusion";
  }
  return "unknown";
}

std::string_view to_string(ErrorFamily family) {
  return family == ErrorFamily::hallucination ? "hallucination" : "invalid_path";
}

ErrorFamily family_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_output:
    case ErrorKind::hallucinated_node:
    case ErrorKind::hallucinated_edge:
      return ErrorFamily::hallucination;
    default:
      return ErrorFamily::invalid_path;
  }
}

double surprise(const CreativeArtifact& path, const LabelDistribution& dist) {
  double total = 0.0;
  for (Label l : path.labels()) {
    const double w = dist.weight(l);
    if (!(w > 0.0)) {
      throw DomainError(std::string("label '") + l.letter() + "' has zero probability");
    }
    total -= std::log(w);
  }
  return total / static_cast<double>(path.hops());
}

double novelty(const CreativeArtifact& path, const MetricParams& params,
               const LabelDistribution& dist) {
  return params.alpha_h * static_cast<double>(path.hops()) + params.alpha_r * surprise(path, dist);
}

double utility(const CreativeArtifact& path, const CreativePrompt& x,
               const ConceptualSpace& space, const MetricParams& params) {
  if (!satisfies(space, x, path)) return 0.0;
  return (1.0 + params.alpha_inc * static_cast<double>(x.include.size())) *
         (1.0 + params.alpha_exc * static_cast<double>(x.exclude.size()));
}

double creativity_score(std::span<const ScoredResult> results) {
  if (results.empty()) throw ConfigError("creativity of an empty result set is undefined");
  double total = 0.0;
  for (const auto& r : results) total += r.utility * r.novelty;
  return total / static_cast<double>(results.size());
}

namespace {

struct Mean {
  double sum = 0.0;
  std::size_t count = 0;
  void add(double x) {
    sum += x;
    ++count;
  }
  std::optional<double> value() const {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  }
};

Mean single_hop_success_novelty(const std::vector<ScoredResult>& results) {
  Mean m;
  for (const auto& r : results) {
    if (r.success() && r.artifact && r.artifact->hops() == 1) m.add(r.novelty);
  }
  return m;
}

std::optional<double> ratio(const std::vector<ScoredResult>& results, Mean denominator) {
  Mean numerator;
  for (const auto& r : results) {
    if (r.success()) numerator.add(r.novelty);
  }
  const auto num = numerator.value();
  const auto den = denominator.value();
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

}  // namespace

std::map<int, std::optional<double>> normalized_novelty(
    const std::map<int, std::vector<ScoredResult>>& results_by_level) {
  std::map<int, std::optional<double>> out;
  for (const auto& [level, results] : results_by_level) {
    out[level] = ratio(results, single_hop_success_novelty(results));
  }
  return out;
}

std::map<int, std::optional<double>> normalized_novelty(
    const std::map<int, std::vector<ScoredResult>>& results_by_level,
    const std::map<int, std::vector<ScoredResult>>& reference_by_level) {
  std::map<int, std::optional<double>> out;
  for (const auto& [level, results] : results_by_level) {
    const auto ref = reference_by_level.find(level);
    out[level] = ref == reference_by_level.end()
                     ? std::nullopt
                     : ratio(results, single_hop_success_novelty(ref->second));
  }
  return out;
}

namespace {

std::optional<ErrorKind> classify_artifact(const CreativeArtifact& path, const CreativePrompt& x,
                                           const ConceptualSpace& space) {
  for (NodeId n : path.nodes()) {
    if (!space.contains(n)) return ErrorKind::hallucinated_node;
  }
  if (!validate_walk(space, path).valid()) return ErrorKind::hallucinated_edge;
  if (path.start() != x.start) return ErrorKind::wrong_start;
  if (path.end() != x.end) return ErrorKind::wrong_end;
  const LabelSet used = path.label_set();
  if (!used.includes(x.include)) return ErrorKind::missing_inclusion;
  if (used.intersects(x.exclude)) return ErrorKind::violated_exclusion;
  return std::nullopt;
}

}  // namespace

std::optional<ErrorKind> classify_error(std::string_view raw_output, const CreativePrompt& x,
                                        const ConceptualSpace& space, std::size_t max_hops) {
  auto parsed = parse_path(raw_output, max_hops);
  if (std::holds_alternative<PathParseFailure>(parsed)) return ErrorKind::malformed_output;
  return classify_artifact(std::get<CreativeArtifact>(parsed), x, space);
}

ScoredResult score_artifact(const CreativeArtifact& path, const CreativePrompt& x,
                            const ConceptualSpace& space, const MetricParams& params) {
  ScoredResult r;
  r.error = classify_artifact(path, x, space);
  r.novelty = novelty(path, params, space.label_dist());
  r.utility = r.error ? 0.0 : utility(path, x, space, params);
  r.creativity = r.utility * r.novelty;
  r.artifact = path;
  return r;
}

ScoredResult score_output(std::string_view raw_output, const CreativePrompt& x,
                          const ConceptualSpace& space, const MetricParams& params,
                          std::size_t max_hops) {
  auto parsed = parse_path(raw_output, max_hops);
  if (std::holds_alternative<PathParseFailure>(parsed)) {
    ScoredResult r;
    r.error = ErrorKind::malformed_output;
    return r;
  }
  return score_artifact(std::get<CreativeArtifact>(parsed), x, space, params);
}

}  // namespace ccbench
