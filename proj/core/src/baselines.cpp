#include "anb/baselines.hpp"

#include <algorithm>
#include <string>
#include <tuple>

namespace anb::baselines {

All2AllNode init_all2all_node(NodeId id) {
  All2AllNode node;
  node.id = id;
  return node;
}

std::vector<IdBatch> all2all_step(All2AllNode& node, std::span<const IdBatch* const> inbox, Round round) {
  node.newly_learned.clear();
  if (round == 0 && node.known_ids.insert(node.id)) node.newly_learned.push_back(node.id);
  for (const IdBatch* batch : inbox) {
    for (NodeId j : batch->ids) {
      if (node.known_ids.insert(j)) node.newly_learned.push_back(j);
    }
  }
  if (node.newly_learned.empty()) return {};
  std::sort(node.newly_learned.begin(), node.newly_learned.end());
  return {IdBatch{node.id, node.newly_learned}};
}

bool st_inbox_less(const StMessage& a, const StMessage& b) {
  return std::tie(a.kind, a.query, a.sender) < std::tie(b.kind, b.query, b.sender);
}

StNode init_st_node(NodeId id, std::span<const NodeId> links) {
  StNode node;
  node.id = id;
  node.links.assign(links.begin(), links.end());
  std::sort(node.links.begin(), node.links.end());
  return node;
}

std::vector<StMessage> st_step(StNode& node, std::span<const StMessage* const> inbox, Round round) {
  std::vector<StMessage> out;
  const auto violation = [&](const std::string& what) {
    throw ProtocolError("node " + std::to_string(node.id) + " (single tree): " + what);
  };

  if (round == 0) {
    auto& own = node.queries[node.id];
    own.partial = 1;
    own.sent = 1;
    node.computed_size = 1;
    out.push_back({node.id, StKind::Query, node.id, std::nullopt, 0, 0});
  }

  std::vector<NodeId> touched;
  for (const StMessage* m : inbox) {
    if (m->kind == StKind::Query) {
      auto it = node.queries.find(m->query);
      if (it == node.queries.end()) {
        // First time this query is heard: lowest sender id wins the parent slot.
        StQueryRecord rec;
        rec.parent = m->sender;
        rec.partial = 1;
        rec.sent = 2;
        node.queries.emplace(m->query, std::move(rec));
        out.push_back({node.id, StKind::Query, m->query, m->sender, 0, 0});
        out.push_back({node.id, StKind::Count, m->query, std::nullopt, m->sender, 1});
        continue;
      }
      StQueryRecord& rec = it->second;
      if (rec.parent && *rec.parent == m->sender) {
        violation("query " + std::to_string(m->query) + " repeated by parent " + std::to_string(m->sender));
      }
      if (m->parent && *m->parent == node.id) rec.children.push_back(m->sender);
    } else {
      if (m->target != node.id) continue;
      auto it = node.queries.find(m->query);
      if (it == node.queries.end()) {
        violation("count for unknown query " + std::to_string(m->query));
      }
      if (m->query == node.id) {
        node.computed_size += m->value;
        it->second.partial += m->value;
      } else {
        if (it->second.pending == 0) touched.push_back(m->query);
        it->second.pending += m->value;
      }
    }
  }

  for (NodeId q : touched) {
    StQueryRecord& rec = node.queries.at(q);
    out.push_back({node.id, StKind::Count, q, std::nullopt, *rec.parent, rec.pending});
    rec.partial += rec.pending;
    rec.pending = 0;
    ++rec.sent;
  }
  node.messages_sent += out.size();
  return out;
}

}  // namespace anb::baselines
