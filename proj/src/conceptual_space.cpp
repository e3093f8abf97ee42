#include "ccbench/conceptual_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "ccbench/error.hpp"

namespace ccbench {

std::string NodeId::name() const {
  std::string out(3, 'A');
  std::uint32_t v = value_;
  for (int i = 2; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<char>('A' + v % 26);
    v /= 26;
  }
  return out;
}

std::optional<NodeId> NodeId::from_name(std::string_view name) {
  if (name.size() != 3) return std::nullopt;
  std::uint32_t v = 0;
  for (char c : name) {
    if (c < 'A' || c > 'Z') return std::nullopt;
    v = v * 26 + static_cast<std::uint32_t>(c - 'A');
  }
  return NodeId(v);
}

std::vector<Label> LabelSet::labels() const {
  std::vector<Label> out;
  out.reserve(size());
  for (std::uint8_t i = 0; i < kAlphabetSize; ++i) {
    if ((bits_ >> i) & 1U) out.emplace_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// LabelDistribution

LabelDistribution LabelDistribution::uniform() {
  std::array<double, kAlphabetSize> w;
  w.fill(1.0);
  return from_weights(w);
}

LabelDistribution LabelDistribution::geometric(double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw ConfigError("geometric label ratio must be positive and finite");
  }
  std::array<double, kAlphabetSize> w;
  double x = 1.0;
  for (auto& wi : w) {
    wi = x;
    x *= ratio;
  }
  return from_weights(w);
}

LabelDistribution LabelDistribution::from_weights(std::span<const double> weights, bool normalize) {
  if (weights.size() != kAlphabetSize) {
    throw ConfigError("label distribution needs exactly 26 weights, got " +
                      std::to_string(weights.size()));
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ConfigError("label weights must be positive and finite");
    }
    sum += w;
  }
  LabelDistribution d;
  for (std::size_t i = 0; i < kAlphabetSize; ++i) {
    d.weights_[i] = normalize ? weights[i] / sum : weights[i];
  }
  if (!normalize && std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError("label weights must sum to 1 within 1e-12");
  }
  std::partial_sum(d.weights_.begin(), d.weights_.end(), d.cumulative_.begin());
  return d;
}

LabelDistribution LabelDistribution::from_spec(std::string_view spec) {
  if (spec == "uniform") return uniform();
  if (spec == "geometric") return geometric();
  if (spec.starts_with("geometric:")) {
    const auto arg = spec.substr(10);
    double r = 0.0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), r);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw ConfigError("bad geometric ratio in label distribution '" + std::string(spec) + "'");
    }
    return geometric(r);
  }
  std::ifstream in{std::string(spec)};
  if (!in) {
    throw ConfigError("label distribution '" + std::string(spec) +
                      "' is neither uniform, geometric:<r>, nor a readable file");
  }
  std::vector<double> w{std::istream_iterator<double>(in), std::istream_iterator<double>()};
  if (!in.eof()) throw ConfigError("non-numeric entry in label weight file " + std::string(spec));
  return from_weights(w);
}

Label LabelDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  for (std::uint8_t i = 0; i + 1 < kAlphabetSize; ++i) {
    if (u < cumulative_[i]) return Label(i);
  }
  return Label(kAlphabetSize - 1);
}

// ---------------------------------------------------------------------------
// ConceptualSpace

ConceptualSpace::ConceptualSpace(std::uint32_t node_count, std::vector<Edge> edges,
                                 LabelDistribution label_dist, std::uint64_t seed)
    : node_count_(node_count),
      edges_(std::move(edges)),
      label_dist_(std::move(label_dist)),
      seed_(seed) {
  if (node_count_ < 2 || node_count_ > kMaxNodes) {
    throw ConfigError("node count must be in [2, 17576], got " + std::to_string(node_count_));
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size() * 2);
  std::vector<std::uint32_t> degree(node_count_, 0);
  for (const Edge& e : edges_) {
    if (!contains(e.u) || !contains(e.v)) throw ConfigError("edge endpoint out of range");
    if (e.u == e.v) throw ConfigError("self-loop at " + e.u.name());
    if (e.label.value() >= kAlphabetSize) throw ConfigError("edge label out of range");
    if (!seen.insert(pair_key(e.u, e.v)).second) {
      throw ConfigError("duplicate edge between " + e.u.name() + " and " + e.v.name());
    }
    ++degree[e.u.value()];
    ++degree[e.v.value()];
  }

  offsets_.assign(node_count_ + 1, 0);
  for (std::uint32_t i = 0; i < node_count_; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  neighbors_.resize(offsets_.back());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    neighbors_[fill[e.u.value()]++] = {e.v, e.label};
    neighbors_[fill[e.v.value()]++] = {e.u, e.label};
  }
  for (std::uint32_t i = 0; i < node_count_; ++i) {
    std::sort(neighbors_.begin() + offsets_[i], neighbors_.begin() + offsets_[i + 1]);
  }
}

std::span<const Neighbor> ConceptualSpace::adjacency(NodeId u) const {
  if (!contains(u)) return {};
  return std::span<const Neighbor>(neighbors_).subspan(
      offsets_[u.value()], offsets_[u.value() + 1] - offsets_[u.value()]);
}

std::vector<NodeId> ConceptualSpace::neighbors(NodeId u, Label l) const {
  std::vector<NodeId> out;
  for (const Neighbor& n : adjacency(u)) {
    if (n.label == l) out.push_back(n.node);
  }
  return out;
}

std::optional<Label> ConceptualSpace::edge_label(NodeId u, NodeId v) const {
  const auto adj = adjacency(u);
  auto it = std::lower_bound(adj.begin(), adj.end(), v,
                             [](const Neighbor& n, NodeId x) { return n.node < x; });
  if (it == adj.end() || it->node != v) return std::nullopt;
  return it->label;
}

bool ConceptualSpace::has_edge(NodeId u, NodeId v, Label l) const {
  const auto found = edge_label(u, v);
  return found && *found == l;
}

bool ConceptualSpace::operator==(const ConceptualSpace& other) const {
  return node_count_ == other.node_count_ && seed_ == other.seed_ &&
         label_dist_ == other.label_dist_ && edges_ == other.edges_;
}

std::uint64_t expected_edge_count(std::uint32_t node_count, double avg_degree) {
  return static_cast<std::uint64_t>(std::llround(0.5 * node_count * avg_degree));
}

ConceptualSpace generate_space(std::uint32_t node_count, double avg_degree,
                               const LabelDistribution& label_dist, std::uint64_t seed) {
  if (node_count < 2 || node_count > kMaxNodes) {
    throw ConfigError("node count must be in [2, 17576], got " + std::to_string(node_count));
  }
  if (!(avg_degree > 0.0) || !std::isfinite(avg_degree)) {
    throw ConfigError("average degree must be positive");
  }
  const std::uint64_t pairs = static_cast<std::uint64_t>(node_count) * (node_count - 1) / 2;
  const std::uint64_t edge_count = expected_edge_count(node_count, avg_degree);
  if (edge_count > pairs) {
    throw ConfigError("average degree " + std::to_string(avg_degree) + " needs " +
                      std::to_string(edge_count) + " edges but only " + std::to_string(pairs) +
                      " node pairs exist");
  }

  Rng rng(child_seed(seed, "graph"));
  std::vector<Edge> edges;
  edges.reserve(edge_count);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edge_count * 2);
  while (edges.size() < edge_count) {
    const NodeId u(static_cast<std::uint32_t>(rng.below(node_count)));
    const NodeId v(static_cast<std::uint32_t>(rng.below(node_count)));
    if (u == v || !seen.insert(pair_key(u, v)).second) continue;
    edges.push_back({u, v, label_dist.sample(rng)});
  }
  return ConceptualSpace(node_count, std::move(edges), label_dist, seed);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string_view field(std::string_view token, std::string_view key, std::size_t line) {
  if (!token.starts_with(key) || token.size() <= key.size() || token[key.size()] != '=') {
    throw ParseError(line, "expected header field '" + std::string(key) + "='");
  }
  return token.substr(key.size() + 1);
}

template <typename T>
T parse_number(std::string_view s, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void serialize_space(const ConceptualSpace& space, std::ostream& out) {
  out << "#ccgraph v1 nodes=" << space.node_count() << " seed=" << space.seed() << " weights=";
  const auto& w = space.label_dist().weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out << ',';
    out << format_double(w[i]);
  }
  out << '\n';
  std::string token(7, ' ');
  for (const Edge& e : space.edges()) {
    const auto u = e.u.name();
    const auto v = e.v.name();
    token.replace(0, 3, u);
    token[3] = e.label.letter();
    token.replace(4, 3, v);
    out << token << '\n';
  }
}

std::string serialize_space(const ConceptualSpace& space) {
  std::ostringstream out;
  serialize_space(space, out);
  return std::move(out).str();
}

ConceptualSpace deserialize_space(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty graph file");
  const auto head = split(line, ' ');
  if (head.size() != 5 || head[0] != "#ccgraph" || head[1] != "v1") {
    throw ParseError(1, "expected '#ccgraph v1 nodes=.. seed=.. weights=..' header");
  }
  const auto node_count = parse_number<std::uint32_t>(field(head[2], "nodes", 1), 1, "node count");
  const auto seed = parse_number<std::uint64_t>(field(head[3], "seed", 1), 1, "seed");
  std::vector<double> weights;
  for (auto w : split(field(head[4], "weights", 1), ',')) {
    weights.push_back(parse_number<double>(w, 1, "label weight"));
  }
  if (node_count < 2 || node_count > kMaxNodes) throw ParseError(1, "node count out of range");
  LabelDistribution dist = [&] {
    try {
      return LabelDistribution::from_weights(weights, /*normalize=*/false);
    } catch (const ConfigError& e) {
      throw ParseError(1, e.what());
    }
  }();

  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.size() != 7) throw ParseError(lineno, "edge token must be 7 characters: '" + line + "'");
    const auto u = NodeId::from_name(std::string_view(line).substr(0, 3));
    const auto l = Label::from_letter(line[3]);
    const auto v = NodeId::from_name(std::string_view(line).substr(4, 3));
    if (!u || !v || !l) throw ParseError(lineno, "malformed edge token '" + line + "'");
    if (u->value() >= node_count || v->value() >= node_count) {
      throw ParseError(lineno, "unknown node in edge token '" + line + "'");
    }
    if (*u == *v) throw ParseError(lineno, "self-loop in edge token '" + line + "'");
    if (!seen.insert(pair_key(*u, *v)).second) {
      throw ParseError(lineno, "duplicate edge '" + line + "'");
    }
    edges.push_back({*u, *v, *l});
  }
  return ConceptualSpace(node_count, std::move(edges), std::move(dist), seed);
}

ConceptualSpace deserialize_space(std::string_view text) {
  std::istringstream in{std::string(text)};
  return deserialize_space(in);
}

ConceptualSpace load_space(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open graph file " + path);
  return deserialize_space(in);
}

void save_space(const ConceptualSpace& space, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write graph file " + path);
  serialize_space(space, out);
}

std::string to_hex(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string space_checksum(const ConceptualSpace& space) {
  return to_hex(fnv1a64(serialize_space(space)));
}

}  // namespace ccbench
