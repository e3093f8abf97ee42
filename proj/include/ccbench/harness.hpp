#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccbench/conceptual_space.hpp"
#include "ccbench/dataset.hpp"
#include "ccbench/report.hpp"
#include "json.hpp"

namespace ccbench {

// ---------------------------------------------------------------------------
// Wire protocol (see docs/protocol.md). One JSON object per line each way:
//   request:  {"id": <u64>, "prompt": "<rendered prompt>", "h_max": <int>}
//   response: {"id": <u64>, "path": "<rendered path or empty>"}

struct SolverRequest {
  std::uint64_t id = 0;
  std::string prompt;
  std::size_t h_max = 0;
  bool operator==(const SolverRequest&) const = default;
};

struct SolverResponse {
  std::uint64_t id = 0;
  std::string path;
  bool operator==(const SolverResponse&) const = default;
};

std::string encode_request(const SolverRequest& r);
std::string encode_response(const SolverResponse& r);
/// Both throw ProtocolError on anything but a well-formed object.
SolverRequest decode_request(std::string_view line);
SolverResponse decode_response(std::string_view line);

class Solver {
 public:
  virtual ~Solver() = default;
  /// Exactly one path per request, in request order. An empty string is an
  /// abstention (including timeouts).
  virtual std::vector<std::string> solve(std::span<const SolverRequest> requests) = 0;
};

// ---------------------------------------------------------------------------
// Baselines

enum class BaselineKind { oracle, random_walker, greedy_walker };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::oracle;
  std::uint64_t seed = 0;

  /// "oracle", "random[:seed]", "greedy[:seed]".
  static BaselineSpec parse(std::string_view text);
  std::string name() const;
};

/// In-process non-neural solvers.
///  - oracle: exact-hop constrained search at the record's reference hop
///    count when known, otherwise (or when that fails) the shortest search.
///  - random_walker: uniform choice among non-excluded incident edges; stops
///    on reaching the end node with every inclusion label covered, or after
///    h_max hops.
///  - greedy_walker: finishes as soon as a direct edge completes the prompt,
///    otherwise prefers edges with still-uncovered inclusion labels, then any
///    non-excluded edge (uniform within the preferred class).
/// Walkers seed one stream per request id, so answers are order-independent.
class BaselineSolver final : public Solver {
 public:
  BaselineSolver(const ConceptualSpace& space, BaselineSpec spec,
                 std::unordered_map<std::uint64_t, std::size_t> reference_hops = {});

  std::string answer(const SolverRequest& request) const;
  std::vector<std::string> solve(std::span<const SolverRequest> requests) override;

 private:
  std::string oracle(const CreativePrompt& x, std::size_t h_max,
                     std::optional<std::size_t> hops) const;
  std::string random_walk(const CreativePrompt& x, std::size_t h_max, std::uint64_t id) const;
  std::string greedy_walk(const CreativePrompt& x, std::size_t h_max, std::uint64_t id) const;

  const ConceptualSpace& space_;
  BaselineSpec spec_;
  std::unordered_map<std::uint64_t, std::size_t> reference_hops_;
};

/// Answers protocol requests from `in` on `out` until EOF. Malformed request
/// lines get a response with the recovered id (or 0) and an empty path.
void serve_protocol(const BaselineSolver& solver, std::istream& in, std::ostream& out);

/// Runs `command` through /bin/sh and speaks the line protocol over its
/// stdin/stdout, keeping up to `max_in_flight` requests outstanding. A
/// request times out `timeout` after it becomes the oldest unanswered one;
/// it is then answered with an empty path and any late reply is ignored.
/// Unknown or repeated ids, unparseable lines and premature exit throw
/// ProtocolError.
class SubprocessSolver final : public Solver {
 public:
  SubprocessSolver(std::string command, std::chrono::milliseconds timeout,
                   std::size_t max_in_flight = 64);

  std::vector<std::string> solve(std::span<const SolverRequest> requests) override;

  std::size_t timeouts() const { return timeouts_; }

 private:
  std::string command_;
  std::chrono::milliseconds timeout_;
  std::size_t max_in_flight_;
  std::size_t timeouts_ = 0;
};

// ---------------------------------------------------------------------------
// Evaluation

/// One request per eval record, ids equal to record indices.
std::vector<SolverRequest> make_requests(const std::vector<CorpusRecord>& eval, std::size_t h_max);

/// Record index -> ground-truth hop count, for the oracle baseline.
std::unordered_map<std::uint64_t, std::size_t> reference_hops(const std::vector<CorpusRecord>& eval);

struct EvalRun {
  std::vector<std::string> outputs;
  nlohmann::json report;
};

/// Requests one generation per record, persists outputs.tsv and report.json
/// into `out_dir` when given, and returns both. The report is exactly what
/// `build_report` produces from the persisted outputs.
EvalRun run_eval(const ConceptualSpace& space, const Corpus& eval, Solver& solver,
                 const ReportOptions& options, const std::optional<std::string>& out_dir);

/// Long-format CSV with one row per (config key, report), sorted by key:
/// config,creativity,satisfaction_rate,satisfied,records,nn_level_<l>...
/// Throws ConfigError when the reports disagree on metric parameters.
std::string sweep_report(std::vector<std::pair<std::string, nlohmann::json>> reports);

}  // namespace ccbench
