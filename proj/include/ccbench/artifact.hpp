#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ccbench/conceptual_space.hpp"

namespace ccbench {

/// A query (u, v, I, X): connect `start` to `end` using every label in
/// `include` and none in `exclude`.
struct CreativePrompt {
  NodeId start;
  NodeId end;
  LabelSet include;
  LabelSet exclude;

  bool operator==(const CreativePrompt&) const = default;
};

/// A labeled walk v0 l1 v1 ... lh vh with h >= 1. Graph validity is not
/// part of the type; see validate_walk.
class CreativeArtifact {
 public:
  /// Throws ConfigError unless nodes.size() == labels.size() + 1 and h >= 1.
  CreativeArtifact(std::vector<NodeId> nodes, std::vector<Label> labels);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Label>& labels() const { return labels_; }
  std::size_t hops() const { return labels_.size(); }
  NodeId start() const { return nodes_.front(); }
  NodeId end() const { return nodes_.back(); }
  LabelSet label_set() const;

  bool operator==(const CreativeArtifact&) const = default;

 private:
  std::vector<NodeId> nodes_;
  std::vector<Label> labels_;
};

enum class WalkViolationKind { bad_node, bad_edge };

struct WalkViolation {
  /// Step t refers to (v_{t-1}, l_t, v_t); step 0 means v0 itself.
  std::size_t step;
  WalkViolationKind kind;
  bool operator==(const WalkViolation&) const = default;
};

struct WalkVerdict {
  std::optional<WalkViolation> first_violation;
  bool valid() const { return !first_violation.has_value(); }
};

WalkVerdict validate_walk(const ConceptualSpace& space, const CreativeArtifact& path);

/// True iff `path` is a valid walk from x.start to x.end covering x.include
/// and avoiding x.exclude.
bool satisfies(const ConceptualSpace& space, const CreativePrompt& x, const CreativeArtifact& path);

// Prompt grammar, tokens separated by exactly one space:
//   Q [ U V I: (L )* X: (L )* ] :
// Labels appear in ascending order.
std::string render_prompt(const CreativePrompt& x);
/// Throws ParseError with a byte offset. When `node_count` is given, node
/// names at or beyond it are rejected as unknown.
CreativePrompt parse_prompt(std::string_view text,
                            std::optional<std::uint32_t> node_count = std::nullopt);

inline constexpr std::string_view kEos = "<eos>";

/// "AAA b CCC <eos>"
std::string render_path(const CreativeArtifact& path);

enum class PathFailureKind {
  empty,                // nothing but whitespace
  bad_spacing,          // separators other than single spaces
  expected_node,        // non-node token where a node belongs
  expected_label,       // non-label token where a label belongs
  malformed_truncated,  // stream stops after a label
  missing_eos,          // walk never terminated
  trailing_tokens,      // tokens after <eos>
  no_hops,              // a lone node
  too_long,             // more hops than the allowed maximum
};

std::string_view to_string(PathFailureKind kind);

struct PathParseFailure {
  PathFailureKind kind;
  /// 0-based index of the offending token.
  std::size_t token_index;
};

/// Total parser: every input yields an artifact or a failure. Node tokens are
/// any three uppercase letters; whether they exist in a graph is left to
/// validate_walk.
std::variant<CreativeArtifact, PathParseFailure> parse_path(std::string_view text,
                                                            std::size_t max_hops);

}  // namespace ccbench
