#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "ccbench/artifact.hpp"
#include "ccbench/conceptual_space.hpp"
#include "json.hpp"

namespace ccbench {

enum class Split { train, eval };

/// One query/path instance. `level` and `base_path_id` are meaningful for
/// eval records only; train records carry level 0 and base_path_id -1.
struct CorpusRecord {
  CreativePrompt prompt;
  CreativeArtifact path;
  Split split;
  std::size_t hops;
  int level = 0;
  std::int64_t base_path_id = -1;

  bool operator==(const CorpusRecord&) const = default;
};

struct GenConfig {
  std::uint64_t train_random_count = 10000;
  /// Success probability of the geometric draw behind stage-2 constraint-set sizes.
  double geometric_p = 0.5;
  std::size_t max_constraint_set_size = 5;
  std::size_t h_max_train = 10;
  std::size_t eval_hop_min = 1;
  std::size_t eval_hop_max = 6;
  int eval_levels = 6;
  std::size_t base_paths_per_hop = 50;
  double p_inc = 0.5;
  std::uint64_t seed = 0;
  /// Constraint redraws per (base path, level) before the base path is redrawn.
  std::size_t constraint_resamples = 100;
  /// Start-node draws per hop count before eval generation gives up.
  std::size_t base_path_attempts = 100000;

  /// Throws ConfigError.
  void validate() const;
  nlohmann::json to_json() const;
  static GenConfig from_json(const nlohmann::json& j);
};

/// Unordered (u, v) pairs; membership covers both orientations.
using PairSet = std::unordered_set<std::uint64_t>;

/// Level hierarchy over base paths of each hop count, ordered by
/// (hop, base_path_id, level). Throws GenerationError naming (hop, level)
/// when the resampling budget runs out.
std::vector<CorpusRecord> gen_eval_set(const ConceptualSpace& space, const GenConfig& cfg);

PairSet holdout_pairs(const std::vector<CorpusRecord>& eval);

/// Edge coverage (two 1-hop records per edge not in `holdout`) followed by
/// exactly cfg.train_random_count randomized records.
std::vector<CorpusRecord> gen_train_set(const ConceptualSpace& space, const GenConfig& cfg,
                                        const PairSet& holdout);

/// Size of one stage-2 constraint set: geometric(p) - 1, clamped to `max_size`.
std::size_t draw_constraint_set_size(Rng& rng, double p, std::size_t max_size);

struct CorpusHeader {
  std::string space_checksum;
  std::uint64_t seed = 0;
  nlohmann::json config;

  bool operator==(const CorpusHeader&) const = default;
};

struct Corpus {
  CorpusHeader header;
  std::vector<CorpusRecord> records;
};

// Corpus file: '#'-prefixed header lines
//   #ccbench-corpus v1
//   #space_checksum=<hex>
//   #seed=<u64>
//   #config=<json>
// then one record per line:
//   <prompt>\t<path>\tsplit=<train|eval>,hops=<h>,level=<l>,base_path_id=<id>
void write_corpus(std::ostream& out, const CorpusHeader& header,
                  const std::vector<CorpusRecord>& records);
void write_corpus(const std::string& path, const CorpusHeader& header,
                  const std::vector<CorpusRecord>& records);

/// Throws ParseError (line number) on malformed input and Error when `space`
/// is given and its checksum differs from the header.
Corpus read_corpus(std::istream& in, const ConceptualSpace* space = nullptr);
Corpus read_corpus(const std::string& path, const ConceptualSpace* space = nullptr);

std::string_view to_string(Split split);

}  // namespace ccbench
