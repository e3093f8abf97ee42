#include "ccbench/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ccbench/error.hpp"
#include "ccbench/search.hpp"

namespace ccbench {

void GenConfig::validate() const {
  auto probability = [](double p, const char* name) {
    if (!(p > 0.0 && p < 1.0)) {
      throw ConfigError(std::string(name) + " must lie in (0, 1), got " + std::to_string(p));
    }
  };
  probability(geometric_p, "geometric_p");
  probability(p_inc, "p_inc");
  if (eval_hop_min < 1 || eval_hop_min > eval_hop_max) {
    throw ConfigError("eval hop range must satisfy 1 <= min <= max");
  }
  if (h_max_train < eval_hop_max) throw ConfigError("h_max_train must be >= the largest eval hop");
  if (eval_levels < 1 || eval_levels > static_cast<int>(kMaxInclusionLabels) + 1) {
    throw ConfigError("eval_levels must be in [1, 17]");
  }
  if (max_constraint_set_size > kMaxInclusionLabels) {
    throw ConfigError("max_constraint_set_size must be <= 16");
  }
  if (constraint_resamples == 0 || base_path_attempts == 0) {
    throw ConfigError("resampling budgets must be positive");
  }
}

nlohmann::json GenConfig::to_json() const {
  return {
      {"train_random_count", train_random_count},
      {"geometric_p", geometric_p},
      {"max_constraint_set_size", max_constraint_set_size},
      {"h_max_train", h_max_train},
      {"eval_hop_min", eval_hop_min},
      {"eval_hop_max", eval_hop_max},
      {"eval_levels", eval_levels},
      {"base_paths_per_hop", base_paths_per_hop},
      {"p_inc", p_inc},
      {"seed", seed},
      {"constraint_resamples", constraint_resamples},
      {"base_path_attempts", base_path_attempts},
  };
}

GenConfig GenConfig::from_json(const nlohmann::json& j) {
  GenConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("train_random_count", c.train_random_count);
  get("geometric_p", c.geometric_p);
  get("max_constraint_set_size", c.max_constraint_set_size);
  get("h_max_train", c.h_max_train);
  get("eval_hop_min", c.eval_hop_min);
  get("eval_hop_max", c.eval_hop_max);
  get("eval_levels", c.eval_levels);
  get("base_paths_per_hop", c.base_paths_per_hop);
  get("p_inc", c.p_inc);
  get("seed", c.seed);
  get("constraint_resamples", c.constraint_resamples);
  get("base_path_attempts", c.base_path_attempts);
  return c;
}

std::string_view to_string(Split split) { return split == Split::train ? "train" : "eval"; }

// ---------------------------------------------------------------------------
// Generation

namespace {

Label pick(Rng& rng, LabelSet pool) {
  const auto members = pool.labels();
  return members[rng.below(members.size())];
}

/// `count` constraints against a base path using `base_labels`: each is an
/// inclusion with probability p_inc (drawn from the base path's labels) or an
/// exclusion (drawn from the labels it does not use). A side whose pool is
/// exhausted yields to the other so the total stays `count`.
std::pair<LabelSet, LabelSet> sample_level_constraints(Rng& rng, LabelSet base_labels,
                                                       std::size_t count, double p_inc) {
  LabelSet include;
  LabelSet exclude;
  const LabelSet absent = base_labels.complement();
  for (std::size_t c = 0; c < count; ++c) {
    const LabelSet inc_pool(base_labels.bits() & ~include.bits());
    const LabelSet exc_pool(absent.bits() & ~exclude.bits());
    bool inclusion = rng.bernoulli(p_inc);
    if (inclusion && inc_pool.empty()) inclusion = false;
    if (!inclusion && exc_pool.empty()) inclusion = true;
    if (inclusion) {
      include.insert(pick(rng, inc_pool));
    } else {
      exclude.insert(pick(rng, exc_pool));
    }
  }
  return {include, exclude};
}

LabelSet sample_labels(Rng& rng, std::size_t count, LabelSet forbidden) {
  LabelSet out;
  for (std::size_t i = 0; i < count; ++i) {
    out.insert(pick(rng, LabelSet((forbidden | out).complement().bits())));
  }
  return out;
}

}  // namespace

std::size_t draw_constraint_set_size(Rng& rng, double p, std::size_t max_size) {
  const auto k = rng.geometric(p) - 1;
  return static_cast<std::size_t>(std::min<std::uint64_t>(k, max_size));
}

std::vector<CorpusRecord> gen_eval_set(const ConceptualSpace& space, const GenConfig& cfg) {
  cfg.validate();
  Rng rng(child_seed(cfg.seed, "eval"));
  std::vector<CorpusRecord> out;
  PairSet used;
  std::int64_t base_id = 0;
  const auto n = space.node_count();

  for (std::size_t h = cfg.eval_hop_min; h <= cfg.eval_hop_max; ++h) {
    std::size_t found = 0;
    std::size_t attempts = 0;
    int failing_level = 1;
    while (found < cfg.base_paths_per_hop) {
      if (attempts++ >= cfg.base_path_attempts) {
        throw GenerationError("eval generation budget exhausted at hop " + std::to_string(h) +
                              ", level " + std::to_string(failing_level));
      }
      failing_level = 1;
      const NodeId u(static_cast<std::uint32_t>(rng.below(n)));
      const auto dist = bfs_distances(space, u, h);
      std::vector<NodeId> at_h;
      for (std::uint32_t i = 0; i < n; ++i) {
        if (dist[i] == h) at_h.emplace_back(i);
      }
      if (at_h.empty()) continue;
      const NodeId v = at_h[rng.below(at_h.size())];
      if (used.contains(pair_key(u, v))) continue;

      CreativePrompt base_prompt{u, v, {}, {}};
      auto base = constrained_bfs(space, base_prompt, h);
      if (!base.found() || base.hops() != h) continue;  // unreachable for a true distance-h pair
      const LabelSet base_labels = base.path->label_set();

      std::vector<CorpusRecord> levels;
      levels.push_back({base_prompt, *base.path, Split::eval, h, 1, base_id});
      bool complete = true;
      for (int level = 2; level <= cfg.eval_levels && complete; ++level) {
        complete = false;
        for (std::size_t tries = 0; tries < cfg.constraint_resamples; ++tries) {
          auto [inc, exc] = sample_level_constraints(rng, base_labels,
                                                     static_cast<std::size_t>(level - 1), cfg.p_inc);
          CreativePrompt x{u, v, inc, exc};
          auto solved = constrained_bfs_exact_hops(space, x, h);
          if (solved.found()) {
            levels.push_back({x, *solved.path, Split::eval, h, level, base_id});
            complete = true;
            break;
          }
        }
        if (!complete) failing_level = level;
      }
      if (!complete) continue;

      used.insert(pair_key(u, v));
      out.insert(out.end(), std::make_move_iterator(levels.begin()),
                 std::make_move_iterator(levels.end()));
      ++found;
      ++base_id;
    }
  }
  return out;
}

PairSet holdout_pairs(const std::vector<CorpusRecord>& eval) {
  PairSet out;
  for (const auto& r : eval) out.insert(pair_key(r.prompt.start, r.prompt.end));
  return out;
}

std::vector<CorpusRecord> gen_train_set(const ConceptualSpace& space, const GenConfig& cfg,
                                        const PairSet& holdout) {
  cfg.validate();
  std::vector<CorpusRecord> out;

  for (const Edge& e : space.edges()) {
    if (holdout.contains(pair_key(e.u, e.v))) continue;
    out.push_back({{e.u, e.v, LabelSet{e.label}, {}},
                   CreativeArtifact({e.u, e.v}, {e.label}), Split::train, 1});
    out.push_back({{e.v, e.u, LabelSet{e.label}, {}},
                   CreativeArtifact({e.v, e.u}, {e.label}), Split::train, 1});
  }

  Rng rng(child_seed(cfg.seed, "train"));
  const auto n = space.node_count();
  const std::uint64_t max_attempts = 1000 + 1000 * cfg.train_random_count;
  std::uint64_t emitted = 0;
  for (std::uint64_t attempt = 0; emitted < cfg.train_random_count; ++attempt) {
    if (attempt >= max_attempts) {
      throw GenerationError("randomized training draws kept failing after " +
                            std::to_string(attempt) + " attempts");
    }
    const NodeId u(static_cast<std::uint32_t>(rng.below(n)));
    const NodeId v(static_cast<std::uint32_t>(rng.below(n)));
    const auto inc_size = draw_constraint_set_size(rng, cfg.geometric_p, cfg.max_constraint_set_size);
    const auto exc_size = draw_constraint_set_size(rng, cfg.geometric_p, cfg.max_constraint_set_size);
    const LabelSet include = sample_labels(rng, inc_size, {});
    const LabelSet exclude = sample_labels(rng, exc_size, include);
    if (u == v || holdout.contains(pair_key(u, v))) continue;

    CreativePrompt x{u, v, include, exclude};
    auto solved = constrained_bfs(space, x, cfg.h_max_train);
    if (!solved.found()) continue;
    const auto hops = solved.hops();
    out.push_back({x, std::move(*solved.path), Split::train, hops});
    ++emitted;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus files

namespace {

constexpr std::string_view kMagic = "#ccbench-corpus v1";
constexpr std::size_t kUnboundedHops = std::size_t{1} << 20;

std::vector<std::string_view> split_on(std::string_view s, char sep) {
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

template <typename T>
T parse_int(std::string_view s, std::size_t line, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::string_view header_value(const std::string& line, std::string_view key, std::size_t lineno) {
  const std::string prefix = "#" + std::string(key) + "=";
  if (!line.starts_with(prefix)) throw ParseError(lineno, "expected header '" + prefix + "'");
  return std::string_view(line).substr(prefix.size());
}

}  // namespace

void write_corpus(std::ostream& out, const CorpusHeader& header,
                  const std::vector<CorpusRecord>& records) {
  out << kMagic << '\n';
  out << "#space_checksum=" << header.space_checksum << '\n';
  out << "#seed=" << header.seed << '\n';
  out << "#config=" << header.config.dump() << '\n';
  for (const auto& r : records) {
    out << render_prompt(r.prompt) << '\t' << render_path(r.path) << "\tsplit=" << to_string(r.split)
        << ",hops=" << r.hops << ",level=" << r.level << ",base_path_id=" << r.base_path_id << '\n';
  }
}

void write_corpus(const std::string& path, const CorpusHeader& header,
                  const std::vector<CorpusRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write corpus " + path);
  write_corpus(out, header, records);
}

Corpus read_corpus(std::istream& in, const ConceptualSpace* space) {
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  auto next_header = [&](std::string_view key) {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError(lineno, "truncated corpus header");
    return std::string(header_value(line, key, lineno));
  };

  ++lineno;
  if (!std::getline(in, line) || line != kMagic) throw ParseError(1, "not a ccbench corpus file");
  corpus.header.space_checksum = next_header("space_checksum");
  corpus.header.seed = parse_int<std::uint64_t>(next_header("seed"), lineno, "seed");
  const auto config = next_header("config");
  try {
    corpus.header.config = nlohmann::json::parse(config);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(lineno, std::string("bad config json: ") + e.what());
  }

  if (space && space_checksum(*space) != corpus.header.space_checksum) {
    throw Error("corpus was generated from a different graph (checksum " +
                corpus.header.space_checksum + ", graph " + space_checksum(*space) + ")");
  }
  const std::optional<std::uint32_t> node_count =
      space ? std::optional(space->node_count()) : std::nullopt;

  while (std::getline(in, line)) {
    ++lineno;
    const auto cols = split_on(line, '\t');
    if (cols.size() != 3) throw ParseError(lineno, "expected 3 tab-separated columns");
    CreativePrompt prompt;
    try {
      prompt = parse_prompt(cols[0], node_count);
    } catch (const ParseError& e) {
      throw ParseError(lineno, std::string("bad prompt: ") + e.what());
    }
    auto parsed = parse_path(cols[1], kUnboundedHops);
    if (auto* failure = std::get_if<PathParseFailure>(&parsed)) {
      throw ParseError(lineno, "bad path (" + std::string(to_string(failure->kind)) + ")");
    }
    auto& path = std::get<CreativeArtifact>(parsed);

    const auto meta = split_on(cols[2], ',');
    if (meta.size() != 4) throw ParseError(lineno, "expected split,hops,level,base_path_id metadata");
    auto value = [&](std::size_t i, std::string_view key) {
      const auto kv = meta[i];
      if (!kv.starts_with(key) || kv.size() <= key.size() || kv[key.size()] != '=') {
        throw ParseError(lineno, "expected metadata key '" + std::string(key) + "'");
      }
      return kv.substr(key.size() + 1);
    };
    const auto split_text = value(0, "split");
    Split split;
    if (split_text == "train") {
      split = Split::train;
    } else if (split_text == "eval") {
      split = Split::eval;
    } else {
      throw ParseError(lineno, "unknown split '" + std::string(split_text) + "'");
    }
    const auto hops = parse_int<std::size_t>(value(1, "hops"), lineno, "hops");
    const auto level = parse_int<int>(value(2, "level"), lineno, "level");
    const auto base = parse_int<std::int64_t>(value(3, "base_path_id"), lineno, "base_path_id");
    corpus.records.push_back({prompt, std::move(path), split, hops, level, base});
  }
  return corpus;
}

Corpus read_corpus(const std::string& path, const ConceptualSpace* space) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open corpus " + path);
  return read_corpus(in, space);
}

}  // namespace ccbench
