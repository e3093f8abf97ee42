#include "ccbench/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ccbench/error.hpp"

namespace ccbench {

std::vector<SolverRequest> make_requests(const std::vector<CorpusRecord>& eval, std::size_t h_max) {
  std::vector<SolverRequest> out;
  out.reserve(eval.size());
  for (std::size_t i = 0; i < eval.size(); ++i) {
    out.push_back({i, render_prompt(eval[i].prompt), h_max});
  }
  return out;
}

std::unordered_map<std::uint64_t, std::size_t> reference_hops(const std::vector<CorpusRecord>& eval) {
  std::unordered_map<std::uint64_t, std::size_t> out;
  for (std::size_t i = 0; i < eval.size(); ++i) out.emplace(i, eval[i].hops);
  return out;
}

EvalRun run_eval(const ConceptualSpace& space, const Corpus& eval, Solver& solver,
                 const ReportOptions& options, const std::optional<std::string>& out_dir) {
  if (eval.header.space_checksum != space_checksum(space)) {
    throw Error("eval corpus checksum " + eval.header.space_checksum +
                " does not match the graph (" + space_checksum(space) + ")");
  }
  options.params.validate();
  const auto requests = make_requests(eval.records, options.max_hops);
  EvalRun run;
  run.outputs = solver.solve(requests);
  if (run.outputs.size() != requests.size()) {
    throw ProtocolError("solver returned " + std::to_string(run.outputs.size()) +
                        " answers for " + std::to_string(requests.size()) + " requests");
  }

  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    const auto outputs_path = (std::filesystem::path(*out_dir) / "outputs.tsv").string();
    write_outputs(outputs_path, run.outputs);
    // Score what was persisted so offline rescoring sees identical inputs.
    run.outputs = read_outputs(outputs_path, eval.records.size());
  }
  run.report = build_report(space, eval.records, run.outputs, options);
  if (out_dir) {
    std::ofstream out(std::filesystem::path(*out_dir) / "report.json", std::ios::binary);
    if (!out) throw ConfigError("cannot write report.json into " + *out_dir);
    out << dump_report(run.report);
  }
  return run;
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string sweep_report(std::vector<std::pair<std::string, nlohmann::json>> reports) {
  if (reports.empty()) throw ConfigError("sweep needs at least one report");
  const auto& params = reports.front().second.at("metric_params");
  std::set<int> levels;
  for (const auto& [key, report] : reports) {
    if (report.at("metric_params") != params) {
      throw ConfigError("report '" + key + "' uses different metric parameters");
    }
    for (const auto& row : report.at("normalized_novelty")) levels.insert(row.at("level").get<int>());
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::ostringstream out;
  out << "config,creativity,satisfaction_rate,satisfied,records";
  for (int l : levels) out << ",nn_level_" << l;
  out << '\n';
  for (const auto& [key, report] : reports) {
    const auto& sat = report.at("utility_satisfaction");
    out << csv_field(key) << ',' << report.at("creativity").dump() << ',' << sat.at("rate").dump()
        << ',' << sat.at("satisfied").dump() << ',' << report.at("records").dump();
    for (int l : levels) {
      out << ',';
      for (const auto& row : report.at("normalized_novelty")) {
        if (row.at("level").get<int>() == l && !row.at("value").is_null()) {
          out << row.at("value").dump();
        }
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ccbench
