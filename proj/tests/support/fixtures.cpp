#include "fixtures.hpp"

#include <algorithm>
#include <unistd.h>

#include <filesystem>

namespace ccbench::testing {

ConceptualSpace small_space(std::uint32_t nodes, double avg_degree, std::uint64_t seed,
                            const LabelDistribution& dist) {
  return generate_space(nodes, avg_degree, dist, seed);
}

WalkEnumerator::WalkEnumerator(const ConceptualSpace& space) : adj_(space.node_count()) {
  for (const Edge& e : space.edges()) {
    adj_[e.u.value()].emplace_back(e.v, e.label);
    adj_[e.v.value()].emplace_back(e.u, e.label);
  }
}

std::set<std::size_t> WalkEnumerator::satisfying_lengths(const CreativePrompt& x,
                                                         std::size_t h_max) const {
  std::set<std::size_t> lengths;
  std::vector<Label> labels;
  auto dfs = [&](auto&& self, NodeId at) -> void {
    if (!labels.empty() && at == x.end) {
      std::set<int> used;
      for (Label l : labels) used.insert(l.value());
      bool ok = true;
      for (Label l : x.include.labels()) ok = ok && used.count(l.value());
      for (Label l : x.exclude.labels()) ok = ok && !used.count(l.value());
      if (ok) lengths.insert(labels.size());
    }
    if (labels.size() == h_max) return;
    for (const auto& [next, label] : adj_[at.value()]) {
      labels.push_back(label);
      self(self, next);
      labels.pop_back();
    }
  };
  dfs(dfs, x.start);
  return lengths;
}

std::optional<std::size_t> WalkEnumerator::shortest(const CreativePrompt& x,
                                                    std::size_t h_max) const {
  const auto lengths = satisfying_lengths(x, h_max);
  if (lengths.empty()) return std::nullopt;
  return *lengths.begin();
}

bool WalkEnumerator::exists_exact(const CreativePrompt& x, std::size_t hops) const {
  return satisfying_lengths(x, hops).count(hops) > 0;
}

std::vector<CreativeArtifact> WalkEnumerator::all_walks(NodeId start, std::size_t hops) const {
  std::vector<CreativeArtifact> out;
  std::vector<NodeId> nodes{start};
  std::vector<Label> labels;
  auto dfs = [&](auto&& self) -> void {
    if (labels.size() == hops) {
      out.emplace_back(nodes, labels);
      return;
    }
    for (const auto& [next, label] : adj_[nodes.back().value()]) {
      nodes.push_back(next);
      labels.push_back(label);
      self(self);
      nodes.pop_back();
      labels.pop_back();
    }
  };
  dfs(dfs);
  return out;
}

bool edge_in_list(const ConceptualSpace& space, NodeId u, NodeId v, Label l) {
  for (const Edge& e : space.edges()) {
    if (e.label == l && ((e.u == u && e.v == v) || (e.u == v && e.v == u))) return true;
  }
  return false;
}

std::vector<NodeId> neighbors_by_scan(const ConceptualSpace& space, NodeId u, Label l) {
  std::vector<NodeId> out;
  for (const Edge& e : space.edges()) {
    if (e.label != l) continue;
    if (e.u == u) out.push_back(e.v);
    if (e.v == u) out.push_back(e.u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool independent_predicate(const ConceptualSpace& space, const CreativePrompt& x,
                           const CreativeArtifact& path) {
  std::set<std::tuple<std::uint32_t, std::uint32_t, int>> triples;
  for (const Edge& e : space.edges()) {
    triples.emplace(e.u.value(), e.v.value(), e.label.value());
    triples.emplace(e.v.value(), e.u.value(), e.label.value());
  }
  const auto& nodes = path.nodes();
  const auto& labels = path.labels();
  if (nodes.front() != x.start || nodes.back() != x.end) return false;
  std::set<int> used;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (!triples.count({nodes[t].value(), nodes[t + 1].value(), labels[t].value()})) return false;
    used.insert(labels[t].value());
  }
  for (Label l : x.include.labels()) {
    if (!used.count(l.value())) return false;
  }
  for (Label l : x.exclude.labels()) {
    if (used.count(l.value())) return false;
  }
  return true;
}

CreativePrompt random_prompt(Rng& rng, std::uint32_t node_count, std::size_t max_include,
                             std::size_t max_exclude) {
  CreativePrompt x;
  x.start = NodeId(static_cast<std::uint32_t>(rng.below(node_count)));
  x.end = NodeId(static_cast<std::uint32_t>(rng.below(node_count)));
  const auto n_inc = rng.below(max_include + 1);
  const auto n_exc = rng.below(max_exclude + 1);
  while (x.include.size() < n_inc) x.include.insert(Label(static_cast<std::uint8_t>(rng.below(26))));
  while (x.exclude.size() < n_exc) {
    const Label l(static_cast<std::uint8_t>(rng.below(26)));
    if (!x.include.contains(l)) x.exclude.insert(l);
  }
  return x;
}

std::string temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("ccbench_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

std::vector<std::vector<int>> all_pairs_hops(const ConceptualSpace& space) {
  const auto n = space.node_count();
  constexpr int kInf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (std::uint32_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const Edge& e : space.edges()) {
    d[e.u.value()][e.v.value()] = 1;
    d[e.v.value()][e.u.value()] = 1;
  }
  for (std::uint32_t k = 0; k < n; ++k)
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (auto& row : d)
    for (int& x : row)
      if (x >= kInf) x = -1;
  return d;
}

}  // namespace ccbench::testing
