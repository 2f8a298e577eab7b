#pragma once

#include "anb/graph.hpp"
#include "anb/message.hpp"
#include "anb/metrics.hpp"
#include "anb/oracle.hpp"
#include "anb/trace.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace anb {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SimConfig {
  explicit SimConfig(Graph g) : graph(std::move(g)) {}

  Graph graph;
  Algorithm algorithm = Algorithm::AnB;
  std::size_t n_max = 0;  // 0 means graph.size()
  // Summation mode when set: one positive value per node. AnB only.
  std::optional<std::vector<ExactCount>> values;
  TraceLevel trace_level = TraceLevel::Metrics;
  bool early_stop = true;
  // Test hook: applied to every AnB message as it is emitted.
  std::function<void(Message&)> fault_injector;

  std::size_t effective_n_max() const { return n_max == 0 ? graph.size() : n_max; }
  Round t_max() const { return 4 * static_cast<Round>(effective_n_max()) + 1; }
};

inline constexpr std::size_t kPreIterationRounds = 3;

struct RunResult {
  std::vector<ExactCount> final_counts;  // n_i, or the baseline's estimate
  Round rounds_executed = 0;             // iterative rounds, pre-iteration excluded
  Round t_reduction = 0;
  Round t_converged = 0;
  std::vector<NodeId> residue_ids;       // ascending
  RunMetrics metrics;
  std::optional<RunTrace> trace;         // AnB with trace_level != None
  std::vector<std::optional<Round>> broadcast_entry_rounds;  // AnB only
  std::size_t pre_iteration_rounds = kPreIterationRounds;
};

// Runs the configured algorithm: three pre-iteration exchanges (AnB), then
// rounds 0..t_max-1 with every message delivered to all neighbors of its
// sender in the next round. With early_stop the loop ends once no message is
// in flight and (for AnB) every node is inactive.
//
// Throws ConfigError for n_max < N or bad values, and ProtocolError with the
// round prepended when a node rejects its input.
RunResult run(const SimConfig& config);

// As run with a full trace, then evaluates the oracle. Throws OracleViolation
// on the first failed check.
std::pair<RunResult, OracleReport> run_with_oracle(SimConfig config);

}  // namespace anb
