#pragma once

// Shared test fixtures and reference oracles. The oracles build their own
// view of the graph from the raw edge list and never call into the search,
// validation or adjacency code they are used to check.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ccbench/artifact.hpp"
#include "ccbench/conceptual_space.hpp"
#include "ccbench/rng.hpp"

namespace ccbench::testing {

ConceptualSpace small_space(std::uint32_t nodes, double avg_degree, std::uint64_t seed,
                            const LabelDistribution& dist = LabelDistribution::uniform());

/// Exhaustive walk enumeration over an edge-list copy of the graph.
class WalkEnumerator {
 public:
  explicit WalkEnumerator(const ConceptualSpace& space);

  /// Set of hop counts 1..h_max at which some walk satisfies x.
  std::set<std::size_t> satisfying_lengths(const CreativePrompt& x, std::size_t h_max) const;
  std::optional<std::size_t> shortest(const CreativePrompt& x, std::size_t h_max) const;
  bool exists_exact(const CreativePrompt& x, std::size_t hops) const;

  /// Every walk of exactly `hops` hops from `start`.
  std::vector<CreativeArtifact> all_walks(NodeId start, std::size_t hops) const;

 private:
  std::vector<std::vector<std::pair<NodeId, Label>>> adj_;
};

/// Linear scans over space.edges().
bool edge_in_list(const ConceptualSpace& space, NodeId u, NodeId v, Label l);
std::vector<NodeId> neighbors_by_scan(const ConceptualSpace& space, NodeId u, Label l);

/// Set-based satisfaction check: triples from the edge list, label sets as std::set.
bool independent_predicate(const ConceptualSpace& space, const CreativePrompt& x,
                           const CreativeArtifact& path);

CreativePrompt random_prompt(Rng& rng, std::uint32_t node_count, std::size_t max_include,
                             std::size_t max_exclude);

/// A fresh directory under the system temp dir.
std::string temp_dir(const std::string& name);

/// Floyd-Warshall hop distances; -1 when unreachable.
std::vector<std::vector<int>> all_pairs_hops(const ConceptualSpace& space);

}  // namespace ccbench::testing
