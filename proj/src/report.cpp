#include "ccbench/report.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <utility>

#include "ccbench/error.hpp"

namespace ccbench {

std::vector<ScoredResult> score_outputs(const ConceptualSpace& space,
                                        const std::vector<CorpusRecord>& eval,
                                        std::span<const std::string> outputs,
                                        const ReportOptions& options) {
  if (outputs.size() != eval.size()) {
    throw ConfigError("got " + std::to_string(outputs.size()) + " outputs for " +
                      std::to_string(eval.size()) + " eval records");
  }
  std::vector<ScoredResult> scored;
  scored.reserve(eval.size());
  for (std::size_t i = 0; i < eval.size(); ++i) {
    scored.push_back(
        score_output(outputs[i], eval[i].prompt, space, options.params, options.max_hops));
  }
  return scored;
}

nlohmann::json build_report(const ConceptualSpace& space, const std::vector<CorpusRecord>& eval,
                            std::span<const std::string> outputs, const ReportOptions& options) {
  options.params.validate();
  if (eval.empty()) throw ConfigError("cannot report on an empty eval set");
  const auto scored = score_outputs(space, eval, outputs, options);

  struct Cell {
    std::size_t count = 0;
    std::size_t satisfied = 0;
    double creativity_sum = 0.0;
  };
  std::map<std::pair<std::size_t, int>, Cell> cells;
  std::map<int, std::vector<ScoredResult>> by_level;
  std::map<int, std::vector<ScoredResult>> reference_by_level;
  std::map<ErrorKind, std::size_t> fine;
  std::map<ErrorFamily, std::size_t> rolled;
  std::size_t satisfied = 0;

  for (std::size_t i = 0; i < eval.size(); ++i) {
    const auto& rec = eval[i];
    const auto& r = scored[i];
    auto& cell = cells[{rec.hops, rec.level}];
    ++cell.count;
    cell.creativity_sum += r.creativity;
    if (r.success()) {
      ++cell.satisfied;
      ++satisfied;
    } else {
      ++fine[*r.error];
      ++rolled[family_of(*r.error)];
    }
    by_level[rec.level].push_back(r);
    if (options.denominator == NoveltyDenominator::ground_truth) {
      reference_by_level[rec.level].push_back(
          score_artifact(rec.path, rec.prompt, space, options.params));
    }
  }

  const auto normalized = options.denominator == NoveltyDenominator::model
                              ? normalized_novelty(by_level)
                              : normalized_novelty(by_level, reference_by_level);

  nlohmann::json report;
  report["schema_version"] = kReportSchemaVersion;
  report["log_base"] = "e";
  report["metric_params"] = {{"alpha_h", options.params.alpha_h},
                             {"alpha_r", options.params.alpha_r},
                             {"alpha_i", options.params.alpha_inc},
                             {"alpha_x", options.params.alpha_exc}};
  report["max_hops"] = options.max_hops;
  report["records"] = eval.size();
  report["creativity"] = creativity_score(scored);
  report["utility_satisfaction"] = {
      {"count", eval.size()},
      {"satisfied", satisfied},
      {"rate", static_cast<double>(satisfied) / static_cast<double>(eval.size())}};

  auto& cell_rows = report["cells"] = nlohmann::json::array();
  for (const auto& [key, c] : cells) {
    cell_rows.push_back({{"hop", key.first},
                         {"level", key.second},
                         {"count", c.count},
                         {"satisfied", c.satisfied},
                         {"satisfaction_rate", static_cast<double>(c.satisfied) / c.count},
                         {"creativity_mean", c.creativity_sum / c.count}});
  }

  report["novelty_denominator"] =
      options.denominator == NoveltyDenominator::model ? "model" : "ground_truth";
  auto& nn_rows = report["normalized_novelty"] = nlohmann::json::array();
  for (const auto& [level, value] : normalized) {
    std::size_t successes = 0;
    std::size_t single = 0;
    for (const auto& r : by_level[level]) {
      if (!r.success()) continue;
      ++successes;
      if (r.artifact->hops() == 1) ++single;
    }
    nlohmann::json row = {{"level", level},
                          {"successes", successes},
                          {"single_hop_successes", single},
                          {"value", nullptr}};
    if (value) row["value"] = *value;
    nn_rows.push_back(std::move(row));
  }

  const std::size_t failed = eval.size() - satisfied;
  nlohmann::json fine_json = nlohmann::json::object();
  for (ErrorKind k : kAllErrorKinds) fine_json[std::string(to_string(k))] = fine[k];
  nlohmann::json rolled_json = nlohmann::json::object();
  for (ErrorFamily f : {ErrorFamily::hallucination, ErrorFamily::invalid_path}) {
    rolled_json[std::string(to_string(f))] = rolled[f];
  }
  report["errors"] = {{"failed", failed}, {"fine", fine_json}, {"rolled_up", rolled_json}};
  return report;
}

std::string dump_report(const nlohmann::json& report) { return report.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// outputs.tsv

std::string escape_field(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] != '\\' || i + 1 == escaped.size()) {
      out += escaped[i];
      continue;
    }
    switch (escaped[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case '\\': out += '\\'; break;
      default:
        out += '\\';
        out += escaped[i];
    }
  }
  return out;
}

void write_outputs(const std::string& path, std::span<const std::string> outputs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write outputs file " + path);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    out << i << '\t' << escape_field(outputs[i]) << '\n';
  }
}

std::vector<std::string> read_outputs(const std::string& path, std::size_t expected_count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open outputs file " + path);
  std::vector<std::string> outputs(expected_count);
  std::vector<bool> seen(expected_count, false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(lineno, "expected '<id>\\t<output>'");
    std::size_t id = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, id);
    if (ec != std::errc() || ptr != line.data() + tab) throw ParseError(lineno, "bad record id");
    if (id >= expected_count) throw ParseError(lineno, "record id " + std::to_string(id) + " out of range");
    if (seen[id]) throw ParseError(lineno, "duplicate record id " + std::to_string(id));
    seen[id] = true;
    outputs[id] = unescape_field(std::string_view(line).substr(tab + 1));
  }
  for (std::size_t i = 0; i < expected_count; ++i) {
    if (!seen[i]) throw ParseError(lineno, "no output for record " + std::to_string(i));
  }
  return outputs;
}

}  // namespace ccbench
