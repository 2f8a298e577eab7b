#pragma once

#include "anb/graph.hpp"
#include "anb/message.hpp"
#include "anb/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace anb {

using Round = std::int64_t;

// A node is in L for exactly one round and in R for at most one round; the
// only transitions are A->L, L->R, L->I and R->I.
enum class NodeState : std::uint8_t { Active, Leaf, Residue, Inactive };

constexpr char state_letter(NodeState s) {
  switch (s) {
    case NodeState::Active: return 'A';
    case NodeState::Leaf: return 'L';
    case NodeState::Residue: return 'R';
    case NodeState::Inactive: return 'I';
  }
  return '?';
}

// Raised when a node receives input the protocol cannot produce on a correct
// synchronous network.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Growable membership set over node ids with O(1) insert and lookup.
class IdSet {
 public:
  // Returns true when id was not present.
  bool insert(NodeId id) {
    if (id >= bits_.size()) bits_.resize(static_cast<std::size_t>(id) + 1 + bits_.size() / 2, false);
    if (bits_[id]) return false;
    bits_[id] = true;
    ++size_;
    return true;
  }
  bool contains(NodeId id) const { return id < bits_.size() && bits_[id]; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::vector<NodeId> sorted_ids() const;

  friend bool operator==(const IdSet& a, const IdSet& b) { return a.sorted_ids() == b.sorted_ids(); }

 private:
  std::vector<bool> bits_;
  std::size_t size_ = 0;
};

// Full local state of one AnB node.
struct NodeCore {
  NodeId id = 0;
  NodeState state = NodeState::Active;
  ExactCount count{1};               // c_i
  std::int64_t effective_degree = 0;  // e_i
  // j -> last known effective degree of j, for neighbors believed active.
  std::map<NodeId, std::int64_t> effective_neighborhood;
  IdSet residues;                    // R_i
  ExactSum final_count;              // n_i
  std::vector<NodeId> neighbors;     // N_i, learned from echo messages
  std::vector<NodeId> links;         // physical links, used only to validate echoes
  std::optional<Round> broadcast_entry_round;

  bool operator==(const NodeCore&) const = default;
};

// Algorithm initial values: A, c = 1, N = E = R = {}, n = 0. Throws
// ProtocolError if id is among its own links or links repeat.
NodeCore init_node(NodeId id, std::span<const NodeId> links);

// As init_node with c = value, so the run computes the sum of all values.
NodeCore init_summation_node(NodeId id, std::span<const NodeId> links, ExactCount value);

// Pre-iteration exchange. Step 1 emits the echo; step 2 learns N from the
// echoes, sets e = |N| and emits the degree; step 3 builds E from the degrees.
// Step 2 rejects duplicate echoes and echoes from non-links; step 3 rejects
// degrees from non-neighbors and duplicates.
std::vector<Message> pre_iteration_step1(NodeCore& node);
std::vector<Message> pre_iteration_step2(NodeCore& node, std::span<const Message* const> inbox);
void pre_iteration_step3(NodeCore& node, std::span<const Message* const> inbox);

// One synchronous iteration. `inbox` holds every message sent by a neighbor
// in the previous round, sorted by inbox_less. Returns the envelopes this
// node sends; each goes to the whole neighborhood.
//
// Active nodes absorb counts (emitting one reduce per count) and apply
// reduces, then become leaves if no count arrived and e <= e_j for every
// (j, e_j) in E. Leaves subtract one per leaf message and either become
// residues (e = 0) or send c/e and go inactive. Residues add themselves to R
// and broadcast (id, c). Every node then absorbs and relays each broadcast
// whose origin is not yet in R.
std::vector<Message> step(NodeCore& node, std::span<const Message* const> inbox, Round round);

// Convenience for tests and tools: sorts a copy of the inbox first.
std::vector<Message> step(NodeCore& node, const std::vector<Message>& inbox, Round round);
std::vector<Message> pre_iteration_step2(NodeCore& node, const std::vector<Message>& inbox);
void pre_iteration_step3(NodeCore& node, const std::vector<Message>& inbox);

// max(c, n): a lower bound on the network size at any time in counting mode.
ExactCount quorum_lower_bound(const NodeCore& node);

}  // namespace anb
