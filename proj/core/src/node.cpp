#include "anb/node.hpp"

#include <algorithm>
#include <string>

namespace anb {

bool Message::well_formed() const {
  switch (kind) {
    case MessageKind::Echo:
    case MessageKind::Leaf:
    case MessageKind::Reduce: return std::holds_alternative<std::monostate>(payload);
    case MessageKind::Degree: return std::holds_alternative<std::int64_t>(payload);
    case MessageKind::Count: {
      const auto* c = std::get_if<SharedCount>(&payload);
      return c && *c;
    }
    case MessageKind::Broadcast: {
      const auto* b = std::get_if<BroadcastPayload>(&payload);
      return b && b->count;
    }
  }
  return false;
}

const ExactCount& Message::value() const {
  if (kind == MessageKind::Broadcast) return *std::get<BroadcastPayload>(payload).count;
  return *std::get<SharedCount>(payload);
}

bool operator==(const Message& a, const Message& b) {
  if (a.sender != b.sender || a.kind != b.kind || a.payload.index() != b.payload.index()) return false;
  if (const auto* c = std::get_if<SharedCount>(&a.payload)) return **c == *std::get<SharedCount>(b.payload);
  return a.payload == b.payload;
}

bool inbox_less(const Message& a, const Message& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.kind == MessageKind::Broadcast) {
    const NodeId oa = std::get<BroadcastPayload>(a.payload).origin;
    const NodeId ob = std::get<BroadcastPayload>(b.payload).origin;
    if (oa != ob) return oa < ob;
  }
  return a.sender < b.sender;
}

std::vector<NodeId> IdSet::sorted_ids() const {
  std::vector<NodeId> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(static_cast<NodeId>(i));
  return out;
}

namespace {

[[noreturn]] void violation(const NodeCore& node, const std::string& what) {
  throw ProtocolError("node " + std::to_string(node.id) + ": " + what);
}

std::vector<const Message*> sorted_view(const std::vector<Message>& inbox) {
  std::vector<const Message*> view;
  view.reserve(inbox.size());
  for (const Message& m : inbox) view.push_back(&m);
  std::stable_sort(view.begin(), view.end(),
                   [](const Message* a, const Message* b) { return inbox_less(*a, *b); });
  return view;
}

void active_block(NodeCore& node, std::span<const Message* const> inbox, std::vector<Message>& out) {
  bool count_received = false;
  for (const Message* m : inbox) {
    if (m->kind == MessageKind::Count) {
      auto it = node.effective_neighborhood.find(m->sender);
      if (it == node.effective_neighborhood.end()) {
        violation(node, "count from " + std::to_string(m->sender) + " which is not in E");
      }
      node.count += m->value();
      node.effective_neighborhood.erase(it);
      --node.effective_degree;
      out.push_back(Message::reduce(node.id));
      count_received = true;
    } else if (m->kind == MessageKind::Reduce) {
      auto it = node.effective_neighborhood.find(m->sender);
      if (it == node.effective_neighborhood.end()) {
        violation(node, "reduce from " + std::to_string(m->sender) + " which is not in E");
      }
      if (--it->second < 0) violation(node, "effective degree of " + std::to_string(m->sender) + " below zero");
    }
  }
  if (count_received) return;
  const bool locally_minimal =
      std::all_of(node.effective_neighborhood.begin(), node.effective_neighborhood.end(),
                  [&](const auto& entry) { return node.effective_degree <= entry.second; });
  if (locally_minimal) {
    out.push_back(Message::leaf(node.id));
    node.state = NodeState::Leaf;
  }
}

void leaf_block(NodeCore& node, std::span<const Message* const> inbox, std::vector<Message>& out) {
  for (const Message* m : inbox) {
    if (m->kind != MessageKind::Leaf) continue;
    if (node.effective_degree == 0) violation(node, "leaf message received with e = 0");
    --node.effective_degree;
  }
  if (node.effective_degree == 0) {
    node.state = NodeState::Residue;
  } else {
    out.push_back(Message::count(node.id, node.count / node.effective_degree));
    node.state = NodeState::Inactive;
  }
}

void residue_block(NodeCore& node, Round round, std::vector<Message>& out) {
  node.residues.insert(node.id);
  node.final_count += node.count;
  out.push_back(Message::broadcast(node.id, node.id, node.count));
  node.state = NodeState::Inactive;
  if (!node.broadcast_entry_round) node.broadcast_entry_round = round;
}

void broadcast_block(NodeCore& node, std::span<const Message* const> inbox, Round round,
                     std::vector<Message>& out) {
  for (const Message* m : inbox) {
    if (m->kind != MessageKind::Broadcast) continue;
    const auto& payload = std::get<BroadcastPayload>(m->payload);
    if (!node.residues.insert(payload.origin)) continue;
    node.final_count += *payload.count;
    out.push_back(Message::relay(node.id, payload));
    if (!node.broadcast_entry_round) node.broadcast_entry_round = round;
  }
}

}  // namespace

NodeCore init_node(NodeId id, std::span<const NodeId> links) {
  NodeCore node;
  node.id = id;
  node.links.assign(links.begin(), links.end());
  std::sort(node.links.begin(), node.links.end());
  if (std::binary_search(node.links.begin(), node.links.end(), id)) {
    violation(node, "node listed among its own neighbors");
  }
  if (std::adjacent_find(node.links.begin(), node.links.end()) != node.links.end()) {
    violation(node, "duplicate neighbor");
  }
  return node;
}

NodeCore init_summation_node(NodeId id, std::span<const NodeId> links, ExactCount value) {
  NodeCore node = init_node(id, links);
  node.count = std::move(value);
  return node;
}

std::vector<Message> pre_iteration_step1(NodeCore& node) { return {Message::echo(node.id)}; }

std::vector<Message> pre_iteration_step2(NodeCore& node, std::span<const Message* const> inbox) {
  for (const Message* m : inbox) {
    if (m->kind != MessageKind::Echo) continue;
    if (!std::binary_search(node.links.begin(), node.links.end(), m->sender)) {
      violation(node, "echo from " + std::to_string(m->sender) + " which is not a link");
    }
    if (std::find(node.neighbors.begin(), node.neighbors.end(), m->sender) != node.neighbors.end()) {
      violation(node, "duplicate echo from " + std::to_string(m->sender));
    }
    node.neighbors.push_back(m->sender);
  }
  std::sort(node.neighbors.begin(), node.neighbors.end());
  node.effective_degree = static_cast<std::int64_t>(node.neighbors.size());
  return {Message::degree(node.id, node.effective_degree)};
}

void pre_iteration_step3(NodeCore& node, std::span<const Message* const> inbox) {
  for (const Message* m : inbox) {
    if (m->kind != MessageKind::Degree) continue;
    if (!std::binary_search(node.neighbors.begin(), node.neighbors.end(), m->sender)) {
      violation(node, "degree message from non-neighbor " + std::to_string(m->sender));
    }
    if (!node.effective_neighborhood.emplace(m->sender, m->degree_value()).second) {
      violation(node, "duplicate degree message from " + std::to_string(m->sender));
    }
  }
}

std::vector<Message> step(NodeCore& node, std::span<const Message* const> inbox, Round round) {
  std::vector<Message> out;
  switch (node.state) {
    case NodeState::Active: active_block(node, inbox, out); break;
    case NodeState::Leaf: leaf_block(node, inbox, out); break;
    case NodeState::Residue: residue_block(node, round, out); break;
    case NodeState::Inactive: break;
  }
  broadcast_block(node, inbox, round, out);
  return out;
}

std::vector<Message> step(NodeCore& node, const std::vector<Message>& inbox, Round round) {
  const auto view = sorted_view(inbox);
  return step(node, std::span<const Message* const>(view), round);
}

std::vector<Message> pre_iteration_step2(NodeCore& node, const std::vector<Message>& inbox) {
  const auto view = sorted_view(inbox);
  return pre_iteration_step2(node, std::span<const Message* const>(view));
}

void pre_iteration_step3(NodeCore& node, const std::vector<Message>& inbox) {
  const auto view = sorted_view(inbox);
  pre_iteration_step3(node, std::span<const Message* const>(view));
}

ExactCount quorum_lower_bound(const NodeCore& node) {
  ExactCount n = node.final_count.value();
  return node.count > n ? node.count : n;
}

}  // namespace anb
