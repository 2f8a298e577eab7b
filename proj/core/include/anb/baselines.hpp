#pragma once

#include "anb/graph.hpp"
#include "anb/node.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace anb::baselines {

// ---------------------------------------------------------------------------
// All-2-All flooding: every node floods its id, the estimate is the number of
// distinct ids seen. Ids first learned in a round leave together in one
// envelope at that round.

struct IdBatch {
  NodeId sender;
  std::vector<NodeId> ids;  // ascending
  bool operator==(const IdBatch&) const = default;
};

struct All2AllNode {
  NodeId id = 0;
  IdSet known_ids;
  std::vector<NodeId> newly_learned;

  std::size_t estimate() const { return known_ids.size(); }
};

All2AllNode init_all2all_node(NodeId id);

// Round 0 sends {id}. Later rounds merge every received batch and send the
// ids learned this round, if any.
std::vector<IdBatch> all2all_step(All2AllNode& node, std::span<const IdBatch* const> inbox, Round round);

// ---------------------------------------------------------------------------
// Single Tree, all-nodes variant: every node starts its own query at round 0.
// For each query a node joins the BFS tree on the first round it hears the
// query, picking the lowest-id sender as parent. On joining it forwards the
// query (announcing its parent) and sends a count of 1 to the parent. In
// every later round where counts for that query arrive from children, it
// sends their sum to its parent in one envelope. The origin adds everything
// it receives to its own 1.

enum class StKind : std::uint8_t { Query, Count };

struct StMessage {
  NodeId sender;
  StKind kind;
  NodeId query;                   // origin of the query
  std::optional<NodeId> parent;   // Query: sender's parent (empty for the origin)
  NodeId target = 0;              // Count: the parent it is addressed to
  std::uint64_t value = 0;        // Count: nodes accounted for
  bool operator==(const StMessage&) const = default;
};

bool st_inbox_less(const StMessage& a, const StMessage& b);

struct StQueryRecord {
  std::optional<NodeId> parent;    // empty for the node's own query
  std::vector<NodeId> children;    // senders that announced this node as parent
  std::uint64_t pending = 0;       // counts received this round, to forward
  std::uint64_t partial = 0;       // everything accounted for by this node so far
  std::uint64_t sent = 0;          // messages this node sent for the query
};

struct StNode {
  NodeId id = 0;
  std::vector<NodeId> links;                 // sorted
  std::map<NodeId, StQueryRecord> queries;   // query origin -> record
  std::uint64_t computed_size = 0;           // own query; 0 before round 0
  std::uint64_t messages_sent = 0;
};

StNode init_st_node(NodeId id, std::span<const NodeId> links);

// Throws ProtocolError when the chosen parent sends the query a second time.
std::vector<StMessage> st_step(StNode& node, std::span<const StMessage* const> inbox, Round round);

}  // namespace anb::baselines
