#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccbench/rng.hpp"

namespace ccbench {

inline constexpr int kAlphabetSize = 26;
inline constexpr std::uint32_t kMaxNodes = 26 * 26 * 26;

/// A concept. Index i maps to a three-uppercase-letter name, AAA = 0 ... ZZZ = 17575.
class NodeId {
 public:
  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t value) : value_(value) {}

  constexpr std::uint32_t value() const { return value_; }
  std::string name() const;
  static std::optional<NodeId> from_name(std::string_view name);

  constexpr auto operator<=>(const NodeId&) const = default;

 private:
  std::uint32_t value_ = 0;
};

/// An edge label, a = 0 ... z = 25.
class Label {
 public:
  constexpr Label() = default;
  constexpr explicit Label(std::uint8_t value) : value_(value) {}

  constexpr std::uint8_t value() const { return value_; }
  constexpr char letter() const { return static_cast<char>('a' + value_); }
  static constexpr std::optional<Label> from_letter(char c) {
    if (c < 'a' || c > 'z') return std::nullopt;
    return Label(static_cast<std::uint8_t>(c - 'a'));
  }

  constexpr auto operator<=>(const Label&) const = default;

 private:
  std::uint8_t value_ = 0;
};

/// A subset of the label alphabet, stored as a 26-bit mask.
class LabelSet {
 public:
  constexpr LabelSet() = default;
  constexpr explicit LabelSet(std::uint32_t bits) : bits_(bits & kAll) {}
  LabelSet(std::initializer_list<Label> labels) {
    for (Label l : labels) insert(l);
  }

  static constexpr LabelSet all() { return LabelSet(kAll); }

  constexpr bool contains(Label l) const { return (bits_ >> l.value()) & 1U; }
  constexpr void insert(Label l) { bits_ |= 1U << l.value(); }
  constexpr void erase(Label l) { bits_ &= ~(1U << l.value()); }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint32_t bits() const { return bits_; }

  constexpr bool includes(LabelSet other) const { return (other.bits_ & ~bits_) == 0; }
  constexpr bool intersects(LabelSet other) const { return (bits_ & other.bits_) != 0; }
  constexpr LabelSet operator|(LabelSet o) const { return LabelSet(bits_ | o.bits_); }
  constexpr LabelSet operator&(LabelSet o) const { return LabelSet(bits_ & o.bits_); }
  constexpr LabelSet complement() const { return LabelSet(~bits_ & kAll); }

  /// Members in ascending order.
  std::vector<Label> labels() const;

  constexpr bool operator==(const LabelSet&) const = default;

 private:
  static constexpr std::uint32_t kAll = (1U << kAlphabetSize) - 1;
  std::uint32_t bits_ = 0;
};

/// Probability of each edge label. All weights are positive and sum to one.
class LabelDistribution {
 public:
  static LabelDistribution uniform();
  /// w_l proportional to ratio^l.
  static LabelDistribution geometric(double ratio = 0.9);
  /// Validates positivity; rescales to sum one when `normalize` is set,
  /// otherwise requires the sum to be within 1e-12 of one.
  static LabelDistribution from_weights(std::span<const double> weights, bool normalize = true);
  /// "uniform", "geometric", "geometric:<r>", or a path to a file holding 26
  /// whitespace-separated weights.
  static LabelDistribution from_spec(std::string_view spec);

  double weight(Label l) const { return weights_[l.value()]; }
  const std::array<double, kAlphabetSize>& weights() const { return weights_; }

  /// Inverse-CDF draw.
  Label sample(Rng& rng) const;

  bool operator==(const LabelDistribution&) const = default;

 private:
  LabelDistribution() = default;
  std::array<double, kAlphabetSize> weights_{};
  std::array<double, kAlphabetSize> cumulative_{};
};

/// One undirected edge. `u`/`v` keep the orientation in which the pair was
/// sampled; it only matters for the serialized token.
struct Edge {
  NodeId u;
  NodeId v;
  Label label;
  bool operator==(const Edge&) const = default;
};

struct Neighbor {
  NodeId node;
  Label label;
  auto operator<=>(const Neighbor&) const = default;
};

inline constexpr std::uint64_t pair_key(NodeId a, NodeId b) {
  const auto lo = a < b ? a.value() : b.value();
  const auto hi = a < b ? b.value() : a.value();
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

/// The labeled, simple, undirected graph of concepts. Immutable once built.
class ConceptualSpace {
 public:
  /// Throws ConfigError on self-loops, repeated node pairs or out-of-range nodes.
  ConceptualSpace(std::uint32_t node_count, std::vector<Edge> edges,
                  LabelDistribution label_dist, std::uint64_t seed);

  std::uint32_t node_count() const { return node_count_; }
  std::span<const Edge> edges() const { return edges_; }
  const LabelDistribution& label_dist() const { return label_dist_; }
  std::uint64_t seed() const { return seed_; }

  bool contains(NodeId u) const { return u.value() < node_count_; }

  /// Incident edges of u sorted by (neighbor id, label id).
  std::span<const Neighbor> adjacency(NodeId u) const;
  std::size_t degree(NodeId u) const { return adjacency(u).size(); }

  /// {v : (u, v, l) is an edge}, ascending.
  std::vector<NodeId> neighbors(NodeId u, Label l) const;
  bool has_edge(NodeId u, NodeId v, Label l) const;
  /// Label of the edge joining u and v, if any.
  std::optional<Label> edge_label(NodeId u, NodeId v) const;

  bool operator==(const ConceptualSpace& other) const;

 private:
  std::uint32_t node_count_;
  std::vector<Edge> edges_;
  LabelDistribution label_dist_;
  std::uint64_t seed_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Neighbor> neighbors_;
};

/// Samples round(node_count * avg_degree / 2) distinct node pairs uniformly
/// and labels each edge with an independent draw from `label_dist`.
ConceptualSpace generate_space(std::uint32_t node_count, double avg_degree,
                               const LabelDistribution& label_dist, std::uint64_t seed);

/// Number of edges generate_space produces for these arguments.
std::uint64_t expected_edge_count(std::uint32_t node_count, double avg_degree);

// Graph file: a header line
//   #ccgraph v1 nodes=<N> seed=<S> weights=<w_a>,...,<w_z>
// then one 7-character edge token (e.g. AAAbCCC) per line, LF-terminated.
void serialize_space(const ConceptualSpace& space, std::ostream& out);
std::string serialize_space(const ConceptualSpace& space);
/// Throws ParseError carrying the 1-based line number.
ConceptualSpace deserialize_space(std::istream& in);
ConceptualSpace deserialize_space(std::string_view text);

ConceptualSpace load_space(const std::string& path);
void save_space(const ConceptualSpace& space, const std::string& path);

/// FNV-1a 64 over the serialized form, as 16 lowercase hex digits.
std::string space_checksum(const ConceptualSpace& space);

std::string to_hex(std::uint64_t value);

}  // namespace ccbench
