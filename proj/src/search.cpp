#include "ccbench/search.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "ccbench/error.hpp"

namespace ccbench {

namespace {

/// Maps each inclusion label to its bit in the coverage mask.
class CoverageEncoding {
 public:
  explicit CoverageEncoding(LabelSet include) : bits_(include.size()) {
    bit_.fill(0);
    std::uint32_t next = 1;
    for (Label l : include.labels()) {
      bit_[l.value()] = next;
      next <<= 1;
    }
  }

  std::size_t bits() const { return bits_; }
  std::uint32_t full() const { return (std::uint32_t{1} << bits_) - 1; }
  std::uint32_t bit(Label l) const { return bit_[l.value()]; }

  std::uint64_t state(NodeId node, std::uint32_t mask) const {
    return (static_cast<std::uint64_t>(node.value()) << bits_) | mask;
  }
  NodeId node(std::uint64_t state) const { return NodeId(static_cast<std::uint32_t>(state >> bits_)); }
  std::uint32_t mask(std::uint64_t state) const { return static_cast<std::uint32_t>(state) & full(); }

 private:
  std::size_t bits_;
  std::array<std::uint32_t, kAlphabetSize> bit_;
};

void check_query(const ConceptualSpace& space, const CreativePrompt& x, std::size_t hops) {
  if (hops == 0) throw ConfigError("hop budget must be at least 1");
  if (x.include.intersects(x.exclude)) throw ConfigError("inclusion and exclusion sets overlap");
  if (x.include.size() > kMaxInclusionLabels) {
    throw ConfigError("at most 16 inclusion labels are supported, got " +
                      std::to_string(x.include.size()));
  }
  if (!space.contains(x.start) || !space.contains(x.end)) {
    throw ConfigError("prompt endpoint outside the conceptual space");
  }
}

/// BFS parent pointers; dense storage for small product spaces, hashed otherwise.
class ParentTable {
 public:
  static constexpr std::uint64_t kNone = ~std::uint64_t{0};
  static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 22;

  explicit ParentTable(std::uint64_t state_count) : dense_(state_count <= kDenseLimit) {
    if (dense_) entries_.assign(state_count, kNone);
  }

  /// Records (prev, label) for `state` unless it already has an entry.
  bool try_set(std::uint64_t state, std::uint64_t prev, Label label) {
    const std::uint64_t packed = (prev << 5) | label.value();
    if (dense_) {
      if (entries_[state] != kNone) return false;
      entries_[state] = packed;
      return true;
    }
    return sparse_.try_emplace(state, packed).second;
  }

  std::uint64_t get(std::uint64_t state) const {
    if (dense_) return entries_[state];
    return sparse_.at(state);
  }

 private:
  bool dense_;
  std::vector<std::uint64_t> entries_;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

}  // namespace

SearchResult constrained_bfs(const ConceptualSpace& space, const CreativePrompt& x,
                             std::size_t h_max) {
  check_query(space, x, h_max);
  const CoverageEncoding enc(x.include);
  const std::uint64_t start = enc.state(x.start, 0);
  const std::uint64_t root_marker = (ParentTable::kNone >> 5);

  ParentTable parents(static_cast<std::uint64_t>(space.node_count()) << enc.bits());
  parents.try_set(start, root_marker, Label(0));

  auto reconstruct = [&](std::uint64_t last, Neighbor final_step) {
    std::vector<NodeId> nodes{final_step.node};
    std::vector<Label> labels{final_step.label};
    for (std::uint64_t s = last; s != start;) {
      const std::uint64_t packed = parents.get(s);
      nodes.push_back(enc.node(s));
      labels.emplace_back(static_cast<std::uint8_t>(packed & 31));
      s = packed >> 5;
    }
    nodes.push_back(x.start);
    std::reverse(nodes.begin(), nodes.end());
    std::reverse(labels.begin(), labels.end());
    return CreativeArtifact(std::move(nodes), std::move(labels));
  };

  std::vector<std::uint64_t> frontier{start};
  std::vector<std::uint64_t> next;
  for (std::size_t depth = 0; depth < h_max && !frontier.empty(); ++depth) {
    next.clear();
    for (const std::uint64_t s : frontier) {
      const std::uint32_t mask = enc.mask(s);
      for (const Neighbor& nb : space.adjacency(enc.node(s))) {
        if (x.exclude.contains(nb.label)) continue;
        const std::uint32_t covered = mask | enc.bit(nb.label);
        // Goal is tested on relaxation so that u == v still needs one hop.
        if (nb.node == x.end && covered == enc.full()) return {reconstruct(s, nb)};
        const std::uint64_t t = enc.state(nb.node, covered);
        if (parents.try_set(t, s, nb.label)) next.push_back(t);
      }
    }
    frontier.swap(next);
  }
  return {};
}

SearchResult constrained_bfs_exact_hops(const ConceptualSpace& space, const CreativePrompt& x,
                                        std::size_t hops) {
  check_query(space, x, hops);
  const CoverageEncoding enc(x.include);
  const std::uint64_t start = enc.state(x.start, 0);
  const std::uint64_t goal = enc.state(x.end, enc.full());

  auto for_each_successor = [&](std::uint64_t s, auto&& fn) {
    const std::uint32_t mask = enc.mask(s);
    for (const Neighbor& nb : space.adjacency(enc.node(s))) {
      if (x.exclude.contains(nb.label)) continue;
      if (!fn(nb, enc.state(nb.node, mask | enc.bit(nb.label)))) return;
    }
  };

  // Forward reachability, one sorted layer per step.
  std::vector<std::vector<std::uint64_t>> layers{{start}};
  layers.reserve(hops + 1);
  for (std::size_t t = 0; t < hops; ++t) {
    std::vector<std::uint64_t> next;
    for (const std::uint64_t s : layers.back()) {
      for_each_successor(s, [&](const Neighbor&, std::uint64_t succ) {
        next.push_back(succ);
        return true;
      });
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next.empty()) return {};
    layers.push_back(std::move(next));
  }
  if (!std::binary_search(layers[hops].begin(), layers[hops].end(), goal)) return {};

  // Backward pruning: keep states that reach the goal in exactly the remaining hops.
  layers[hops] = {goal};
  for (std::size_t t = hops; t-- > 0;) {
    const auto& ahead = layers[t + 1];
    std::erase_if(layers[t], [&](std::uint64_t s) {
      bool alive = false;
      for_each_successor(s, [&](const Neighbor&, std::uint64_t succ) {
        alive = std::binary_search(ahead.begin(), ahead.end(), succ);
        return !alive;
      });
      return !alive;
    });
  }

  std::vector<NodeId> nodes{x.start};
  std::vector<Label> labels;
  std::uint64_t cur = start;
  for (std::size_t t = 0; t < hops; ++t) {
    const auto& ahead = layers[t + 1];
    for_each_successor(cur, [&](const Neighbor& nb, std::uint64_t succ) {
      if (!std::binary_search(ahead.begin(), ahead.end(), succ)) return true;
      nodes.push_back(nb.node);
      labels.push_back(nb.label);
      cur = succ;
      return false;
    });
  }
  return {CreativeArtifact(std::move(nodes), std::move(labels))};
}

std::vector<std::uint32_t> bfs_distances(const ConceptualSpace& space, NodeId source,
                                         std::size_t h_max) {
  std::vector<std::uint32_t> dist(space.node_count(), kUnreached);
  if (!space.contains(source)) return dist;
  dist[source.value()] = 0;
  std::vector<NodeId> frontier{source};
  std::vector<NodeId> next;
  for (std::uint32_t d = 1; d <= h_max && !frontier.empty(); ++d) {
    next.clear();
    for (NodeId u : frontier) {
      for (const Neighbor& nb : space.adjacency(u)) {
        if (dist[nb.node.value()] == kUnreached) {
          dist[nb.node.value()] = d;
          next.push_back(nb.node);
        }
      }
    }
    frontier.swap(next);
  }
  return dist;
}

std::optional<std::size_t> shortest_hops_unconstrained(const ConceptualSpace& space, NodeId u,
                                                       NodeId v, std::size_t h_max) {
  if (!space.contains(u) || !space.contains(v)) return std::nullopt;
  const auto dist = bfs_distances(space, u, h_max);
  if (dist[v.value()] == kUnreached) return std::nullopt;
  return dist[v.value()];
}

}  // namespace ccbench
