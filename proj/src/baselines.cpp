#include <charconv>
#include <istream>
#include <ostream>

#include "ccbench/error.hpp"
#include "ccbench/harness.hpp"
#include "ccbench/search.hpp"

namespace ccbench {

BaselineSpec BaselineSpec::parse(std::string_view text) {
  BaselineSpec spec;
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  if (kind == "oracle") {
    spec.kind = BaselineKind::oracle;
  } else if (kind == "random" || kind == "random_walker") {
    spec.kind = BaselineKind::random_walker;
  } else if (kind == "greedy" || kind == "greedy_walker") {
    spec.kind = BaselineKind::greedy_walker;
  } else {
    throw ConfigError("unknown baseline '" + std::string(text) + "' (oracle|random:SEED|greedy)");
  }
  if (colon != std::string_view::npos) {
    const auto arg = text.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), spec.seed);
    if (ec != std::errc() || ptr != arg.data() + arg.size() || spec.kind == BaselineKind::oracle) {
      throw ConfigError("bad baseline seed in '" + std::string(text) + "'");
    }
  }
  return spec;
}

std::string BaselineSpec::name() const {
  switch (kind) {
    case BaselineKind::oracle: return "oracle";
    case BaselineKind::random_walker: return "random:" + std::to_string(seed);
    case BaselineKind::greedy_walker: return "greedy:" + std::to_string(seed);
  }
  return "unknown";
}

BaselineSolver::BaselineSolver(const ConceptualSpace& space, BaselineSpec spec,
                               std::unordered_map<std::uint64_t, std::size_t> reference_hops)
    : space_(space), spec_(spec), reference_hops_(std::move(reference_hops)) {}

std::string BaselineSolver::answer(const SolverRequest& request) const {
  if (request.h_max == 0) return {};
  CreativePrompt x;
  try {
    x = parse_prompt(request.prompt, space_.node_count());
  } catch (const ParseError&) {
    return {};
  }
  switch (spec_.kind) {
    case BaselineKind::oracle: {
      const auto it = reference_hops_.find(request.id);
      return oracle(x, request.h_max,
                    it == reference_hops_.end() ? std::nullopt : std::optional(it->second));
    }
    case BaselineKind::random_walker: return random_walk(x, request.h_max, request.id);
    case BaselineKind::greedy_walker: return greedy_walk(x, request.h_max, request.id);
  }
  return {};
}

std::vector<std::string> BaselineSolver::solve(std::span<const SolverRequest> requests) {
  std::vector<std::string> out;
  out.reserve(requests.size());
  for (const auto& r : requests) out.push_back(answer(r));
  return out;
}

std::string BaselineSolver::oracle(const CreativePrompt& x, std::size_t h_max,
                                   std::optional<std::size_t> hops) const {
  if (x.include.size() > kMaxInclusionLabels) return {};
  if (hops && *hops >= 1) {
    if (auto exact = constrained_bfs_exact_hops(space_, x, *hops); exact.found()) {
      return render_path(*exact.path);
    }
  }
  if (auto shortest = constrained_bfs(space_, x, h_max); shortest.found()) {
    return render_path(*shortest.path);
  }
  return {};
}

namespace {

class Walk {
 public:
  explicit Walk(NodeId start) : nodes_{start} {}

  NodeId current() const { return nodes_.back(); }
  LabelSet covered() const { return covered_; }
  void step(const Neighbor& nb) {
    nodes_.push_back(nb.node);
    labels_.push_back(nb.label);
    covered_.insert(nb.label);
  }
  std::string render() const {
    if (labels_.empty()) return {};
    return render_path(CreativeArtifact(nodes_, labels_));
  }

 private:
  std::vector<NodeId> nodes_;
  std::vector<Label> labels_;
  LabelSet covered_;
};

std::vector<Neighbor> allowed_steps(const ConceptualSpace& space, NodeId at, LabelSet exclude) {
  std::vector<Neighbor> out;
  for (const Neighbor& nb : space.adjacency(at)) {
    if (!exclude.contains(nb.label)) out.push_back(nb);
  }
  return out;
}

}  // namespace

std::string BaselineSolver::random_walk(const CreativePrompt& x, std::size_t h_max,
                                        std::uint64_t id) const {
  Rng rng(child_seed(spec_.seed, id));
  Walk walk(x.start);
  for (std::size_t step = 0; step < h_max; ++step) {
    const auto options = allowed_steps(space_, walk.current(), x.exclude);
    if (options.empty()) break;
    walk.step(options[rng.below(options.size())]);
    if (walk.current() == x.end && walk.covered().includes(x.include)) break;
  }
  return walk.render();
}

std::string BaselineSolver::greedy_walk(const CreativePrompt& x, std::size_t h_max,
                                        std::uint64_t id) const {
  Rng rng(child_seed(spec_.seed, id));
  Walk walk(x.start);
  for (std::size_t step = 0; step < h_max; ++step) {
    const auto options = allowed_steps(space_, walk.current(), x.exclude);
    if (options.empty()) break;

    const Neighbor* finish = nullptr;
    std::vector<Neighbor> preferred;
    for (const Neighbor& nb : options) {
      if (nb.node == x.end && (walk.covered() | LabelSet{nb.label}).includes(x.include)) {
        finish = &nb;
        break;
      }
      if (x.include.contains(nb.label) && !walk.covered().contains(nb.label)) {
        preferred.push_back(nb);
      }
    }
    if (finish) {
      walk.step(*finish);
      break;
    }
    const auto& pool = preferred.empty() ? options : preferred;
    walk.step(pool[rng.below(pool.size())]);
  }
  return walk.render();
}

void serve_protocol(const BaselineSolver& solver, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    SolverResponse response;
    try {
      const auto request = decode_request(line);
      response = {request.id, solver.answer(request)};
    } catch (const ProtocolError&) {
      try {
        const auto j = nlohmann::json::parse(line);
        if (j.is_object() && j.contains("id") && j["id"].is_number_unsigned()) {
          response.id = j["id"].get<std::uint64_t>();
        }
      } catch (const nlohmann::json::exception&) {
      }
    }
    out << encode_response(response) << '\n' << std::flush;
  }
}

}  // namespace ccbench
