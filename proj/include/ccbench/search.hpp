#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ccbench/artifact.hpp"
#include "ccbench/conceptual_space.hpp"

namespace ccbench {

/// Inclusion sets larger than this are rejected; coverage is tracked as a bitmask.
inline constexpr std::size_t kMaxInclusionLabels = 16;

struct SearchResult {
  std::optional<CreativeArtifact> path;

  bool found() const { return path.has_value(); }
  std::size_t hops() const { return path ? path->hops() : 0; }
};

// Both searches run over the product of the graph with the coverage state of
// the inclusion set: a state is (node, covered-inclusion-mask), edges whose
// label is excluded are never traversed, and nodes may be revisited. Among
// equal-length answers the one whose (neighbor id, label id) choices are
// smallest at each step is returned. Both throw ConfigError on overlapping
// constraint sets, more than kMaxInclusionLabels inclusion labels, hop budget
// 0 or endpoints outside the space.

/// Shortest walk of 1..h_max hops satisfying x.
SearchResult constrained_bfs(const ConceptualSpace& space, const CreativePrompt& x,
                             std::size_t h_max);

/// A walk of exactly `hops` hops satisfying x.
SearchResult constrained_bfs_exact_hops(const ConceptualSpace& space, const CreativePrompt& x,
                                        std::size_t hops);

inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

/// Label-blind BFS distances from `source`, truncated at `h_max`;
/// unreached nodes hold kUnreached.
std::vector<std::uint32_t> bfs_distances(const ConceptualSpace& space, NodeId source,
                                         std::size_t h_max);

/// Label-blind hop distance from u to v if it is at most h_max.
std::optional<std::size_t> shortest_hops_unconstrained(const ConceptualSpace& space, NodeId u,
                                                       NodeId v, std::size_t h_max);

}  // namespace ccbench
