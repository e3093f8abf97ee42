#include "ccbench/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccbench/error.hpp"
#include "fixtures.hpp"

namespace ccbench {
namespace {

namespace fs = std::filesystem;

TEST(ProtocolTest, RequestRoundTrip) {
  const SolverRequest r{7, "Q [ AAA ZZZ I: a X: b ] :", 10};
  EXPECT_EQ(encode_request(r), R"({"h_max":10,"id":7,"prompt":"Q [ AAA ZZZ I: a X: b ] :"})");
  EXPECT_EQ(decode_request(encode_request(r)), r);
}

TEST(ProtocolTest, ResponseRoundTripWithEscapes) {
  const SolverResponse r{3, "AAA a \"B\"\t\n"};
  EXPECT_EQ(decode_response(encode_response(r)), r);
  EXPECT_EQ(encode_response({0, ""}), R"({"id":0,"path":""})");
}

TEST(ProtocolTest, RejectsMalformedLines) {
  EXPECT_THROW(decode_response("not json"), ProtocolError);
  EXPECT_THROW(decode_response("[1, 2]"), ProtocolError);
  EXPECT_THROW(decode_response(R"({"path": "x"})"), ProtocolError);
  EXPECT_THROW(decode_response(R"({"id": -1, "path": "x"})"), ProtocolError);
  EXPECT_THROW(decode_response(R"({"id": 1.5, "path": "x"})"), ProtocolError);
  EXPECT_THROW(decode_response(R"({"id": 1, "path": 3})"), ProtocolError);
  EXPECT_THROW(decode_request(R"({"id": 1, "prompt": "x"})"), ProtocolError);
  EXPECT_NO_THROW(decode_response(R"({"id": 1, "path": "x", "extra": true})"));
}

TEST(BaselineSpecTest, Parse) {
  EXPECT_EQ(BaselineSpec::parse("oracle").kind, BaselineKind::oracle);
  EXPECT_EQ(BaselineSpec::parse("random:9").seed, 9u);
  EXPECT_EQ(BaselineSpec::parse("greedy").name(), "greedy:0");
  EXPECT_THROW(BaselineSpec::parse("oracle:3"), ConfigError);
  EXPECT_THROW(BaselineSpec::parse("random:x"), ConfigError);
  EXPECT_THROW(BaselineSpec::parse("beam"), ConfigError);
}

class EvalFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    space_ = new ConceptualSpace(testing::small_space(200, 6.0, 9, LabelDistribution::geometric()));
    GenConfig cfg;
    cfg.base_paths_per_hop = 8;
    cfg.eval_hop_max = 4;
    cfg.seed = 5;
    corpus_ = new Corpus{{space_checksum(*space_), cfg.seed, cfg.to_json()}, gen_eval_set(*space_, cfg)};
  }
  static void TearDownTestSuite() {
    delete corpus_;
    delete space_;
  }

  static double cell_rate(const nlohmann::json& report, std::size_t hop, int level) {
    for (const auto& c : report["cells"]) {
      if (c["hop"] == hop && c["level"] == level) return c["satisfaction_rate"].get<double>();
    }
    ADD_FAILURE() << "no cell " << hop << "/" << level;
    return -1;
  }

  static inline ConceptualSpace* space_ = nullptr;
  static inline Corpus* corpus_ = nullptr;
};

TEST_F(EvalFixture, OracleSatisfiesEveryCell) {
  BaselineSolver oracle(*space_, BaselineSpec::parse("oracle"), reference_hops(corpus_->records));
  const auto run = run_eval(*space_, *corpus_, oracle, {}, std::nullopt);
  ASSERT_EQ(run.report["cells"].size(), 4u * 6u);
  for (const auto& c : run.report["cells"]) EXPECT_EQ(c["satisfaction_rate"], 1.0) << c.dump();
  EXPECT_EQ(run.report["errors"]["failed"], 0);
  // With reference hops every answer has the ground-truth length.
  for (std::size_t i = 0; i < run.outputs.size(); ++i) {
    const auto parsed = parse_path(run.outputs[i], 10);
    ASSERT_EQ(std::get<CreativeArtifact>(parsed).hops(), corpus_->records[i].hops);
  }
}

TEST_F(EvalFixture, OracleWithoutReferenceHopsStillSatisfies) {
  BaselineSolver oracle(*space_, BaselineSpec::parse("oracle"));
  const auto run = run_eval(*space_, *corpus_, oracle, {}, std::nullopt);
  EXPECT_EQ(run.report["utility_satisfaction"]["rate"], 1.0);
}

class EmptySolver final : public Solver {
 public:
  std::vector<std::string> solve(std::span<const SolverRequest> requests) override {
    return std::vector<std::string>(requests.size());
  }
};

TEST_F(EvalFixture, AbstainingSolverScoresZero) {
  EmptySolver none;
  const auto run = run_eval(*space_, *corpus_, none, {}, std::nullopt);
  EXPECT_EQ(run.report["creativity"], 0.0);
  EXPECT_EQ(run.report["errors"]["fine"]["malformed_output"], corpus_->records.size());
  EXPECT_EQ(run.report["errors"]["rolled_up"]["hallucination"], corpus_->records.size());
  EXPECT_EQ(run.report["errors"]["rolled_up"]["invalid_path"], 0);
  for (const auto& row : run.report["normalized_novelty"]) EXPECT_TRUE(row["value"].is_null());
}

TEST_F(EvalFixture, BaselinesAreOrdered) {
  auto creativity = [&](const char* spec) {
    BaselineSolver s(*space_, BaselineSpec::parse(spec), reference_hops(corpus_->records));
    return run_eval(*space_, *corpus_, s, {}, std::nullopt).report["creativity"].get<double>();
  };
  const double oracle = creativity("oracle");
  const double greedy = creativity("greedy:1");
  const double random = creativity("random:1");
  EXPECT_GT(oracle, greedy);
  EXPECT_GT(greedy, random);
}

TEST_F(EvalFixture, ReplayFromDiskIsBitIdentical) {
  const auto dir = testing::temp_dir("harness_replay");
  BaselineSolver greedy(*space_, BaselineSpec::parse("greedy:3"));
  const auto run = run_eval(*space_, *corpus_, greedy, {}, dir);
  const auto outputs = read_outputs((fs::path(dir) / "outputs.tsv").string(), corpus_->records.size());
  EXPECT_EQ(outputs, run.outputs);
  std::ifstream in(fs::path(dir) / "report.json", std::ios::binary);
  const std::string on_disk((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(on_disk, dump_report(build_report(*space_, corpus_->records, outputs, {})));
}

TEST_F(EvalFixture, ChecksumMismatchRefused) {
  Corpus tampered = *corpus_;
  tampered.header.space_checksum = "0000000000000000";
  EmptySolver none;
  EXPECT_THROW(run_eval(*space_, tampered, none, {}, std::nullopt), Error);
}

TEST_F(EvalFixture, WalkersAreOrderIndependent) {
  BaselineSolver walker(*space_, BaselineSpec::parse("random:4"));
  auto requests = make_requests(corpus_->records, 10);
  const auto forward = walker.solve(requests);
  std::reverse(requests.begin(), requests.end());
  auto backward = walker.solve(requests);
  std::reverse(backward.begin(), backward.end());
  EXPECT_EQ(forward, backward);
}

// Probability that a uniform walker from u first reaches v within h steps,
// by dynamic programming over the unabsorbed mass.
double hit_probability(const ConceptualSpace& s, NodeId u, NodeId v, std::size_t h) {
  std::vector<double> mass(s.node_count(), 0.0);
  mass[u.value()] = 1.0;
  double hit = 0.0;
  for (std::size_t t = 0; t < h; ++t) {
    std::vector<double> next(s.node_count(), 0.0);
    for (std::uint32_t a = 0; a < s.node_count(); ++a) {
      if (mass[a] == 0.0) continue;
      const auto adj = s.adjacency(NodeId(a));
      for (const Neighbor& nb : adj) next[nb.node.value()] += mass[a] / static_cast<double>(adj.size());
    }
    hit += next[v.value()];
    next[v.value()] = 0.0;
    mass = std::move(next);
  }
  return hit;
}

TEST_F(EvalFixture, RandomWalkerMatchesHittingProbability) {
  const std::size_t h_max = 10;
  BaselineSolver walker(*space_, BaselineSpec::parse("random:11"));
  double expected = 0.0;
  double variance = 0.0;
  std::size_t hits = 0;
  Rng rng(6);
  for (std::uint64_t id = 0; id < 2000; ++id) {
    const Edge& e = space_->edges()[rng.below(space_->edges().size())];
    const CreativePrompt x{e.u, e.v, {}, {}};
    const double p = hit_probability(*space_, e.u, e.v, h_max);
    expected += p;
    variance += p * (1 - p);
    const auto out = walker.answer({id, render_prompt(x), h_max});
    hits += !classify_error(out, x, *space_, h_max).has_value();
  }
  EXPECT_LT(std::abs(static_cast<double>(hits) - expected), 2.576 * std::sqrt(variance))
      << "hits " << hits << " expected " << expected;
}

TEST(ServeProtocolTest, AnswersEveryLine) {
  const auto s = testing::small_space(30, 4.0, 2);
  BaselineSolver oracle(s, BaselineSpec::parse("oracle"));
  const Edge e = s.edges()[0];
  std::istringstream in(encode_request({4, render_prompt({e.u, e.v, {}, {}}), 5}) + "\n" +
                        "garbage\n" + R"({"id": 9, "prompt": 1})" + "\n");
  std::ostringstream out;
  serve_protocol(oracle, in, out);
  std::istringstream lines(out.str());
  std::string line;
  std::vector<SolverResponse> responses;
  while (std::getline(lines, line)) responses.push_back(decode_response(line));
  ASSERT_EQ(responses.size(), 3u);
  EXPECT_EQ(responses[0], (SolverResponse{4, render_path(CreativeArtifact({e.u, e.v}, {e.label}))}));
  EXPECT_EQ(responses[1], (SolverResponse{0, ""}));
  EXPECT_EQ(responses[2], (SolverResponse{9, ""}));
}

class SubprocessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::temp_dir("subprocess");
    space_ = std::make_unique<ConceptualSpace>(testing::small_space(200, 6.0, 9));
    graph_ = (fs::path(dir_) / "graph.txt").string();
    save_space(*space_, graph_);
    Rng rng(1);
    for (std::uint64_t i = 0; i < 300; ++i) {
      const auto x = testing::random_prompt(rng, 200, 2, 2);
      requests_.push_back({i * 3 + 1, render_prompt(x), 10});
    }
  }

  std::string dir_;
  std::unique_ptr<ConceptualSpace> space_;
  std::string graph_;
  std::vector<SolverRequest> requests_;
};

TEST_F(SubprocessTest, MatchesInProcessBaseline) {
  for (const char* spec : {"oracle", "greedy:2"}) {
    SubprocessSolver sub(std::string(CCBENCH_CLI) + " serve-baseline --graph " + graph_ +
                             " --baseline " + spec,
                         std::chrono::seconds(30), 16);
    BaselineSolver local(*space_, BaselineSpec::parse(spec));
    EXPECT_EQ(sub.solve(requests_), local.solve(requests_)) << spec;
    EXPECT_EQ(sub.timeouts(), 0u);
  }
}

TEST_F(SubprocessTest, OutOfOrderRepliesAreMatchedById) {
  // Answers each window of requests in reverse, echoing the id.
  const auto script = (fs::path(dir_) / "reverse.py").string();
  std::ofstream(script) << R"(import json, sys
buf = []
for line in sys.stdin:
    buf.append(json.loads(line)["id"])
    if len(buf) == 4:
        for i in reversed(buf):
            print(json.dumps({"id": i, "path": "P%d" % i}), flush=True)
        buf = []
for i in reversed(buf):
    print(json.dumps({"id": i, "path": "P%d" % i}), flush=True)
)";
  SubprocessSolver sub("python3 " + script, std::chrono::seconds(30), 4);
  const auto out = sub.solve(requests_);
  for (std::size_t i = 0; i < requests_.size(); ++i) {
    ASSERT_EQ(out[i], "P" + std::to_string(requests_[i].id));
  }
}

TEST_F(SubprocessTest, SilentSolverTimesOut) {
  const std::vector<SolverRequest> few(requests_.begin(), requests_.begin() + 3);
  SubprocessSolver sub("sleep 30", std::chrono::milliseconds(100), 8);
  const auto start = std::chrono::steady_clock::now();
  const auto out = sub.solve(few);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
  EXPECT_EQ(out, std::vector<std::string>(3));
  EXPECT_EQ(sub.timeouts(), 3u);
}

TEST_F(SubprocessTest, ProtocolViolationsThrow) {
  const std::vector<SolverRequest> few(requests_.begin(), requests_.begin() + 2);
  const auto timeout = std::chrono::seconds(10);
  EXPECT_THROW(SubprocessSolver("echo garbage; cat > /dev/null", timeout).solve(few), ProtocolError);
  EXPECT_THROW(SubprocessSolver(R"(echo '{"id": 999, "path": ""}'; cat > /dev/null)", timeout).solve(few),
               ProtocolError);
  EXPECT_THROW(SubprocessSolver("true", timeout).solve(few), ProtocolError);
  const auto dup = std::string(R"(read l; echo '{"id": 1, "path": ""}'; echo '{"id": 1, "path": ""}'; cat > /dev/null)");
  EXPECT_THROW(SubprocessSolver(dup, timeout).solve(few), ProtocolError);
}

nlohmann::json fake_report(double creativity, std::size_t satisfied, MetricParams p = {}) {
  nlohmann::json r;
  r["metric_params"] = {{"alpha_h", p.alpha_h}, {"alpha_r", p.alpha_r},
                        {"alpha_i", p.alpha_inc}, {"alpha_x", p.alpha_exc}};
  r["creativity"] = creativity;
  r["records"] = 4;
  r["utility_satisfaction"] = {{"count", 4}, {"satisfied", satisfied}, {"rate", satisfied / 4.0}};
  r["normalized_novelty"] = nlohmann::json::array(
      {{{"level", 1}, {"value", 1.0}}, {{"level", 2}, {"value", nullptr}}});
  return r;
}

TEST(SweepReportTest, SortedRowsWithExactValues) {
  const auto csv = sweep_report({{"b,run", fake_report(2.5, 1)}, {"a", fake_report(0.5, 4)}});
  EXPECT_EQ(csv,
            "config,creativity,satisfaction_rate,satisfied,records,nn_level_1,nn_level_2\n"
            "a,0.5,1.0,4,4,1.0,\n"
            "\"b,run\",2.5,0.25,1,4,1.0,\n");
}

TEST(SweepReportTest, RefusesMixedMetricParams) {
  MetricParams other;
  other.alpha_h = 2.0;
  EXPECT_THROW(sweep_report({{"a", fake_report(1, 1)}, {"b", fake_report(1, 1, other)}}), ConfigError);
  EXPECT_THROW(sweep_report({}), ConfigError);
}

TEST(OutputsFileTest, EscapingRoundTrip) {
  const auto dir = testing::temp_dir("outputs");
  const std::vector<std::string> outputs = {"", "AAA a AAB <eos>", "tab\there", "a\\b\nc\rd"};
  const auto path = (fs::path(dir) / "outputs.tsv").string();
  write_outputs(path, outputs);
  EXPECT_EQ(read_outputs(path, outputs.size()), outputs);
  EXPECT_THROW(read_outputs(path, outputs.size() + 1), ParseError);
  std::ofstream(path) << "0\tx\n0\ty\n";
  EXPECT_THROW(read_outputs(path, 2), ParseError);
}

}  // namespace
}  // namespace ccbench
