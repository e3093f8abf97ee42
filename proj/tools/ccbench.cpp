// ccbench: command-line front end for graph/corpus generation, scoring and
// evaluation. Run `ccbench --help` for the subcommands.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ccbench/conceptual_space.hpp"
#include "ccbench/dataset.hpp"
#include "ccbench/error.hpp"
#include "ccbench/harness.hpp"
#include "ccbench/report.hpp"
#include "ccbench/tokenizer.hpp"

namespace fs = std::filesystem;
using namespace ccbench;

namespace {

struct MetricFlags {
  MetricParams params;
  std::string denominator = "model";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--alpha-h", params.alpha_h, "Novelty weight per hop")->capture_default_str();
    cmd->add_option("--alpha-r", params.alpha_r, "Novelty weight on surprise")->capture_default_str();
    cmd->add_option("--alpha-i", params.alpha_inc, "Utility weight per inclusion label")->capture_default_str();
    cmd->add_option("--alpha-x", params.alpha_exc, "Utility weight per exclusion label")->capture_default_str();
    cmd->add_option("--novelty-denominator", denominator,
                    "Single-hop reference for normalized novelty")
        ->check(CLI::IsMember({"model", "ground-truth"}))
        ->capture_default_str();
  }

  ReportOptions options(const Corpus& eval) const {
    ReportOptions o;
    o.params = params;
    o.max_hops = GenConfig::from_json(eval.header.config).h_max_train;
    o.denominator = denominator == "model" ? NoveltyDenominator::model : NoveltyDenominator::ground_truth;
    return o;
  }
};

std::string file_checksum(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return to_hex(fnv1a64(ss.str()));
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial-creativity benchmark toolkit"};
  app.require_subcommand(1);

  // gen-graph
  auto* gen_graph = app.add_subcommand("gen-graph", "Generate a labeled conceptual-space graph");
  std::uint32_t nodes = kMaxNodes;
  double avg_degree = 6.0;
  std::string label_dist = "geometric:0.9";
  std::uint64_t seed = 0;
  std::string out_path;
  gen_graph->add_option("--nodes", nodes, "Node count (<= 17576)")->capture_default_str();
  gen_graph->add_option("--avg-degree", avg_degree, "Average node degree")->capture_default_str();
  gen_graph->add_option("--label-dist", label_dist, "uniform | geometric:r | weight file")->capture_default_str();
  gen_graph->add_option("--seed", seed, "Random seed")->capture_default_str();
  gen_graph->add_option("--out", out_path, "Output graph file")->required();

  // gen-data
  auto* gen_data = app.add_subcommand("gen-data", "Generate train.tsv, eval.tsv and manifest.json");
  std::string graph_path;
  std::string out_dir;
  GenConfig gen_cfg;
  gen_data->add_option("--graph", graph_path, "Graph file")->required();
  gen_data->add_option("--train-random", gen_cfg.train_random_count, "Randomized training records")->capture_default_str();
  gen_data->add_option("--geometric-p", gen_cfg.geometric_p, "Constraint-size geometric parameter")->capture_default_str();
  gen_data->add_option("--base-paths-per-hop", gen_cfg.base_paths_per_hop, "Eval base paths per hop count")->capture_default_str();
  gen_data->add_option("--p-inc", gen_cfg.p_inc, "Probability a level constraint is an inclusion")->capture_default_str();
  gen_data->add_option("--h-max-train", gen_cfg.h_max_train, "Hop limit for training searches")->capture_default_str();
  gen_data->add_option("--eval-hop-min", gen_cfg.eval_hop_min)->capture_default_str();
  gen_data->add_option("--eval-hop-max", gen_cfg.eval_hop_max)->capture_default_str();
  gen_data->add_option("--eval-levels", gen_cfg.eval_levels)->capture_default_str();
  gen_data->add_option("--seed", gen_cfg.seed, "Random seed")->capture_default_str();
  gen_data->add_option("--out-dir", out_dir, "Output directory")->required();

  // vocab
  auto* vocab = app.add_subcommand("vocab", "Write the tokenizer manifest (vocab.json)");
  std::string vocab_out;
  vocab->add_option("--out", vocab_out, "Output path")->required();

  // score
  auto* score = app.add_subcommand("score", "Score persisted solver outputs against an eval set");
  std::string eval_path;
  std::string outputs_path;
  std::string report_path = "report.json";
  MetricFlags score_metrics;
  score->add_option("--graph", graph_path, "Graph file")->required();
  score->add_option("--eval", eval_path, "eval.tsv")->required();
  score->add_option("--outputs", outputs_path, "outputs.tsv")->required();
  score->add_option("--out", report_path, "Report path")->capture_default_str();
  score_metrics.add_to(score);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Run a solver over an eval set and score it");
  std::string solver_cmd;
  std::string baseline;
  double timeout_s = 30.0;
  std::size_t max_in_flight = 64;
  MetricFlags eval_metrics;
  evaluate->add_option("--graph", graph_path, "Graph file")->required();
  evaluate->add_option("--eval", eval_path, "eval.tsv")->required();
  auto* solver_opt = evaluate->add_option("--solver", solver_cmd, "Solver command speaking the line protocol");
  auto* baseline_opt = evaluate->add_option("--baseline", baseline, "oracle | random:SEED | greedy[:SEED]");
  solver_opt->excludes(baseline_opt);
  evaluate->add_option("--timeout", timeout_s, "Per-request timeout in seconds")->capture_default_str();
  evaluate->add_option("--max-in-flight", max_in_flight, "Pipelined requests")->capture_default_str();
  evaluate->add_option("--out-dir", out_dir, "Output directory")->required();
  eval_metrics.add_to(evaluate);

  // serve-baseline
  auto* serve = app.add_subcommand("serve-baseline", "Answer protocol requests on stdin with a baseline");
  std::string serve_eval;
  serve->add_option("--graph", graph_path, "Graph file")->required();
  serve->add_option("--baseline", baseline, "oracle | random:SEED | greedy[:SEED]")->required();
  serve->add_option("--eval", serve_eval, "eval.tsv supplying reference hop counts to the oracle");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Collect reports into a long-format CSV table");
  std::vector<std::string> report_args;
  std::string sweep_out;
  sweep->add_option("--report", report_args, "KEY=PATH, repeatable")->required();
  sweep->add_option("--out", sweep_out, "Output CSV (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_graph) {
      const auto start = std::chrono::steady_clock::now();
      const auto space = generate_space(nodes, avg_degree, LabelDistribution::from_spec(label_dist), seed);
      save_space(space, out_path);
      const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
      std::cerr << "wrote " << space.node_count() << " nodes, " << space.edges().size()
                << " edges to " << out_path << " in " << took.count() << " s\n";
    } else if (*gen_data) {
      gen_cfg.validate();
      const auto space = load_space(graph_path);
      fs::create_directories(out_dir);
      const auto eval = gen_eval_set(space, gen_cfg);
      const auto train = gen_train_set(space, gen_cfg, holdout_pairs(eval));
      const CorpusHeader header{space_checksum(space), gen_cfg.seed, gen_cfg.to_json()};
      const fs::path dir(out_dir);
      write_corpus((dir / "eval.tsv").string(), header, eval);
      write_corpus((dir / "train.tsv").string(), header, train);
      write_text(dir / "vocab.json", Vocabulary::manifest());
      nlohmann::json manifest = {
          {"config", gen_cfg.to_json()},
          {"graph", {{"path", graph_path}, {"checksum", header.space_checksum},
                     {"nodes", space.node_count()}, {"edges", space.edges().size()}}},
          {"files",
           {{"train.tsv", {{"records", train.size()}, {"checksum", file_checksum(dir / "train.tsv")}}},
            {"eval.tsv", {{"records", eval.size()}, {"checksum", file_checksum(dir / "eval.tsv")}}},
            {"vocab.json", {{"checksum", Vocabulary::checksum()}}}}},
      };
      write_text(dir / "manifest.json", manifest.dump(2) + "\n");
      std::cerr << "wrote " << train.size() << " train and " << eval.size() << " eval records to "
                << out_dir << "\n";
    } else if (*vocab) {
      write_text(vocab_out, Vocabulary::manifest());
    } else if (*score) {
      const auto space = load_space(graph_path);
      const auto eval = read_corpus(eval_path, &space);
      const auto outputs = read_outputs(outputs_path, eval.records.size());
      const auto report = build_report(space, eval.records, outputs, score_metrics.options(eval));
      write_text(report_path, dump_report(report));
    } else if (*evaluate) {
      if (solver_cmd.empty() == baseline.empty()) {
        throw ConfigError("evaluate needs exactly one of --solver or --baseline");
      }
      const auto space = load_space(graph_path);
      const auto eval = read_corpus(eval_path, &space);
      const auto options = eval_metrics.options(eval);
      nlohmann::json run_info;
      EvalRun run;
      if (!baseline.empty()) {
        BaselineSolver solver(space, BaselineSpec::parse(baseline), reference_hops(eval.records));
        run = run_eval(space, eval, solver, options, out_dir);
        run_info["solver"] = "baseline:" + BaselineSpec::parse(baseline).name();
        run_info["timeouts"] = 0;
      } else {
        SubprocessSolver solver(solver_cmd, std::chrono::milliseconds(static_cast<long>(timeout_s * 1000)),
                                max_in_flight);
        run = run_eval(space, eval, solver, options, out_dir);
        run_info["solver"] = solver_cmd;
        run_info["timeouts"] = solver.timeouts();
      }
      run_info["records"] = eval.records.size();
      run_info["timeout_s"] = timeout_s;
      write_text(fs::path(out_dir) / "run.json", run_info.dump(2) + "\n");
      std::cerr << "creativity " << run.report["creativity"].get<double>() << ", satisfaction "
                << run.report["utility_satisfaction"]["rate"].get<double>() << "\n";
    } else if (*serve) {
      const auto space = load_space(graph_path);
      std::unordered_map<std::uint64_t, std::size_t> hops;
      if (!serve_eval.empty()) hops = reference_hops(read_corpus(serve_eval, &space).records);
      const BaselineSolver solver(space, BaselineSpec::parse(baseline), std::move(hops));
      serve_protocol(solver, std::cin, std::cout);
    } else if (*sweep) {
      std::vector<std::pair<std::string, nlohmann::json>> reports;
      for (const auto& arg : report_args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos) throw ConfigError("--report expects KEY=PATH, got " + arg);
        std::ifstream in(arg.substr(eq + 1));
        if (!in) throw ConfigError("cannot open report " + arg.substr(eq + 1));
        reports.emplace_back(arg.substr(0, eq), nlohmann::json::parse(in));
      }
      const auto table = sweep_report(std::move(reports));
      if (sweep_out.empty()) {
        std::cout << table;
      } else {
        write_text(sweep_out, table);
      }
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << " (position " << e.position() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
