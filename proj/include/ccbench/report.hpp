#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ccbench/conceptual_space.hpp"
#include "ccbench/dataset.hpp"
#include "ccbench/scoring.hpp"
#include "json.hpp"

namespace ccbench {

inline constexpr int kReportSchemaVersion = 1;

/// Source of the single-hop denominator in normalized novelty.
enum class NoveltyDenominator { model, ground_truth };

struct ReportOptions {
  MetricParams params;
  /// Hop limit handed to the parser; outputs beyond it are malformed.
  std::size_t max_hops = 10;
  NoveltyDenominator denominator = NoveltyDenominator::model;
};

/// Scores outputs[i] against eval[i].
std::vector<ScoredResult> score_outputs(const ConceptualSpace& space,
                                        const std::vector<CorpusRecord>& eval,
                                        std::span<const std::string> outputs,
                                        const ReportOptions& options);

/// report.json: overall creativity, per-(hop, level) satisfaction and
/// creativity, per-level normalized novelty, and fine and rolled-up error
/// histograms, all with counts. A pure function of its inputs.
nlohmann::json build_report(const ConceptualSpace& space, const std::vector<CorpusRecord>& eval,
                            std::span<const std::string> outputs, const ReportOptions& options);

/// Canonical text of a report as written to disk.
std::string dump_report(const nlohmann::json& report);

// outputs.tsv: one "<record id>\t<escaped output>" line per eval record,
// sorted by id. Backslash, tab, LF and CR are escaped as \\ \t \n \r.
void write_outputs(const std::string& path, std::span<const std::string> outputs);
/// Throws ParseError unless ids 0..expected_count-1 each appear exactly once.
std::vector<std::string> read_outputs(const std::string& path, std::size_t expected_count);

std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view escaped);

}  // namespace ccbench
