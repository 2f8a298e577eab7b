#pragma once

#include "anb/graph.hpp"
#include "anb/message.hpp"
#include "anb/node.hpp"
#include "anb/rational.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <vector>

namespace anb {

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TraceLevel : std::uint8_t { None, Metrics, Full };

using KindCounts = std::array<std::uint64_t, kMessageKindCount>;

inline std::uint64_t& at(KindCounts& counts, MessageKind kind) {
  return counts[static_cast<std::size_t>(kind)];
}
inline std::uint64_t at(const KindCounts& counts, MessageKind kind) {
  return counts[static_cast<std::size_t>(kind)];
}

// One node as seen at the start of a round.
struct NodeSnapshot {
  NodeState state = NodeState::Active;
  std::int64_t effective_degree = 0;
  ExactCount count;
  ExactCount final_count;
  std::map<NodeId, std::int64_t> effective_neighborhood;
  std::size_t residue_set_size = 0;
  KindCounts emitted{};  // envelopes this node sent during the round

  bool operator==(const NodeSnapshot&) const = default;
};

// Round t: node states at the start of the round, the messages delivered at
// the start of the round and the messages emitted during it. The envelopes
// emitted in round t are exactly the envelopes delivered in round t+1.
struct RoundTrace {
  Round round = 0;
  std::array<std::size_t, 4> state_counts{};  // indexed by NodeState
  KindCounts delivered{};    // envelopes delivered (each counted once)
  KindCounts receptions{};   // (envelope, recipient) pairs
  KindCounts emitted{};      // envelopes emitted
  std::size_t final_count_changes = 0;  // nodes whose n changed during the round
  std::vector<NodeSnapshot> nodes;      // TraceLevel::Full only

  std::size_t in_state(NodeState s) const { return state_counts[static_cast<std::size_t>(s)]; }
  bool operator==(const RoundTrace&) const = default;
};

// Everything an AnB run leaves behind for metrics and oracle checks.
struct RunTrace {
  TraceLevel level = TraceLevel::Metrics;
  std::size_t node_count = 0;
  ExactCount expected_total;                 // N, or the sum of the values
  KindCounts pre_iteration_emitted{};        // echo and degree envelopes
  std::vector<RoundTrace> rounds;
  std::vector<ExactCount> final_counts;      // n_i after the last round
  std::vector<std::size_t> final_residue_set_sizes;
  std::vector<NodeSnapshot> final_nodes;     // TraceLevel::Full only

  bool operator==(const RunTrace&) const = default;
};

// Dump of a full trace: one line per (round, node) in round-major order,
//   t=<round> node=<id> state=<A|L|R|I> e=<e> c=<num/den> n=<num/den> emitted=<list>
// where <list> is "-" or comma-separated "kind:targets" entries, targets being
// the number of neighbors each envelope of that kind reached, summed. State,
// e, c and n are taken at the start of the round.
void write_trace(std::ostream& os, const RunTrace& trace, const Graph& graph);

}  // namespace anb
