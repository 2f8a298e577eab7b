#include "anb/engine.hpp"

#include "anb/baselines.hpp"
#include "anb/node.hpp"

#include <algorithm>
#include <string>

namespace anb {

namespace {

template <class Msg>
using Inboxes = std::vector<std::vector<const Msg*>>;

// Hands every message of `in_flight` (already in inbox order) to all
// neighbors of its sender. Because the flight list is sorted, every inbox is
// sorted too.
template <class Msg>
void deliver_to_neighbors(const Graph& g, const std::vector<Msg>& in_flight, Inboxes<Msg>& inbox) {
  for (auto& box : inbox) box.clear();
  for (const Msg& m : in_flight)
    for (NodeId j : g.neighbors(m.sender)) inbox[j].push_back(&m);
}

void validate(const SimConfig& config) {
  const std::size_t n = config.graph.size();
  if (config.n_max != 0 && config.n_max < n) {
    throw ConfigError("n_max = " + std::to_string(config.n_max) + " is below the network size " + std::to_string(n));
  }
  if (config.values) {
    if (config.algorithm != Algorithm::AnB) throw ConfigError("summation mode is only defined for AnB");
    if (config.values->size() != n) {
      throw ConfigError("expected " + std::to_string(n) + " values, got " + std::to_string(config.values->size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if ((*config.values)[i] <= 0) throw ConfigError("value of node " + std::to_string(i) + " is not positive");
    }
  }
}

[[noreturn]] void rethrow_at(const std::string& where, const ProtocolError& e) {
  throw ProtocolError(where + ": " + e.what());
}

NodeSnapshot snapshot(const NodeCore& node) {
  NodeSnapshot s;
  s.state = node.state;
  s.effective_degree = node.effective_degree;
  s.count = node.count;
  s.final_count = node.final_count.value();
  s.effective_neighborhood = node.effective_neighborhood;
  s.residue_set_size = node.residues.size();
  return s;
}

void sort_flight(std::vector<Message>& flight) {
  std::stable_sort(flight.begin(), flight.end(), inbox_less);
}

RunResult run_anb(const SimConfig& config) {
  const Graph& g = config.graph;
  const std::size_t n = g.size();
  const bool full = config.trace_level == TraceLevel::Full;

  std::vector<NodeCore> nodes;
  nodes.reserve(n);
  for (NodeId i = 0; i < n; ++i) {
    nodes.push_back(config.values ? init_summation_node(i, g.neighbors(i), (*config.values)[i])
                                  : init_node(i, g.neighbors(i)));
  }

  RunTrace trace;
  trace.level = full ? TraceLevel::Full : TraceLevel::Metrics;
  trace.node_count = n;
  if (config.values) {
    trace.expected_total = 0;
    for (const ExactCount& v : *config.values) trace.expected_total += v;
  } else {
    trace.expected_total = ExactCount(n);
  }

  const auto emit = [&](std::vector<Message>& sink, std::vector<Message>&& out, KindCounts& counts) {
    for (Message& m : out) {
      if (config.fault_injector) config.fault_injector(m);
      ++at(counts, m.kind);
      sink.push_back(std::move(m));
    }
  };

  Inboxes<Message> inbox(n);
  std::vector<Message> in_flight;
  std::vector<Message> next;

  // Pre-iteration: echo out, echo in + degree out, degree in.
  for (NodeCore& node : nodes) emit(in_flight, pre_iteration_step1(node), trace.pre_iteration_emitted);
  sort_flight(in_flight);
  deliver_to_neighbors(g, in_flight, inbox);
  try {
    for (NodeCore& node : nodes) emit(next, pre_iteration_step2(node, inbox[node.id]), trace.pre_iteration_emitted);
  } catch (const ProtocolError& e) {
    rethrow_at("pre-iteration exchange 2", e);
  }
  sort_flight(next);
  deliver_to_neighbors(g, next, inbox);
  try {
    for (NodeCore& node : nodes) pre_iteration_step3(node, inbox[node.id]);
  } catch (const ProtocolError& e) {
    rethrow_at("pre-iteration exchange 3", e);
  }
  in_flight.clear();
  next.clear();

  const Round t_max = config.t_max();
  Round executed = 0;
  for (Round t = 0; t < t_max; ++t) {
    deliver_to_neighbors(g, in_flight, inbox);
    RoundTrace rt;
    rt.round = t;
    for (const Message& m : in_flight) {
      ++at(rt.delivered, m.kind);
      at(rt.receptions, m.kind) += g.degree(m.sender);
    }
    for (const NodeCore& node : nodes) ++rt.state_counts[static_cast<std::size_t>(node.state)];
    if (full) {
      rt.nodes.reserve(n);
      for (const NodeCore& node : nodes) rt.nodes.push_back(snapshot(node));
    }

    next.clear();
    std::size_t inactive_after = 0;
    for (NodeCore& node : nodes) {
      const auto& box = inbox[node.id];
      if (node.state == NodeState::Inactive && box.empty()) {
        ++inactive_after;
        continue;
      }
      KindCounts emitted{};
      try {
        emit(next, step(node, box, t), emitted);
      } catch (const ProtocolError& e) {
        rethrow_at("round " + std::to_string(t), e);
      }
      if (at(emitted, MessageKind::Broadcast) > 0) ++rt.final_count_changes;
      for (std::size_t k = 0; k < kMessageKindCount; ++k) rt.emitted[k] += emitted[k];
      if (full) rt.nodes[node.id].emitted = emitted;
      if (node.state == NodeState::Inactive) ++inactive_after;
    }
    sort_flight(next);
    std::swap(in_flight, next);
    trace.rounds.push_back(std::move(rt));
    executed = t + 1;
    if (config.early_stop && in_flight.empty() && inactive_after == n) break;
  }

  RunResult result;
  result.rounds_executed = executed;
  trace.final_counts.reserve(n);
  trace.final_residue_set_sizes.reserve(n);
  result.broadcast_entry_rounds.reserve(n);
  for (const NodeCore& node : nodes) {
    trace.final_counts.push_back(node.final_count.value());
    trace.final_residue_set_sizes.push_back(node.residues.size());
    if (full) trace.final_nodes.push_back(snapshot(node));
    if (node.residues.contains(node.id)) result.residue_ids.push_back(node.id);
    result.broadcast_entry_rounds.push_back(node.broadcast_entry_round);
  }
  result.metrics = collect(trace, g);
  result.final_counts = trace.final_counts;
  result.t_reduction = result.metrics.t_reduction;
  result.t_converged = result.metrics.t_total;
  if (config.trace_level != TraceLevel::None) result.trace = std::move(trace);
  return result;
}

RunResult run_all2all(const SimConfig& config) {
  using baselines::IdBatch;
  const Graph& g = config.graph;
  const std::size_t n = g.size();
  std::vector<baselines::All2AllNode> nodes;
  nodes.reserve(n);
  for (NodeId i = 0; i < n; ++i) nodes.push_back(baselines::init_all2all_node(i));

  Inboxes<IdBatch> inbox(n);
  std::vector<IdBatch> in_flight;
  std::vector<IdBatch> next;
  RunMetrics m;
  m.algorithm = Algorithm::All2All;
  Round last_change = 0;
  Round executed = 0;
  const Round t_max = config.t_max();
  for (Round t = 0; t < t_max; ++t) {
    deliver_to_neighbors(g, in_flight, inbox);
    next.clear();
    for (auto& node : nodes) {
      if (t > 0 && inbox[node.id].empty()) continue;
      for (IdBatch& b : baselines::all2all_step(node, inbox[node.id], t)) {
        ++m.baseline.envelopes;
        m.baseline.id_broadcasts += b.ids.size();
        next.push_back(std::move(b));
      }
    }
    if (!next.empty()) last_change = t;
    std::swap(in_flight, next);
    executed = t + 1;
    if (config.early_stop && in_flight.empty()) break;
  }

  RunResult result;
  result.pre_iteration_rounds = 0;
  result.rounds_executed = executed;
  const std::uint64_t bits = id_bits(n);
  for (const auto& node : nodes) {
    result.final_counts.emplace_back(node.estimate());
    m.memory_bits_per_node.push_back(node.estimate() * bits);
  }
  m.m_total = m.baseline.id_broadcasts;
  m.t_total = last_change;
  m.t_broadcast = last_change;
  m.residue_fraction = 0;
  m.avg_degree = average_degree(g);
  m.memory_formula_bits = memory_estimate(Algorithm::All2All, n, 0, 0);
  m.correct = std::all_of(result.final_counts.begin(), result.final_counts.end(),
                          [&](const ExactCount& v) { return v == ExactCount(n); });
  result.t_converged = last_change;
  result.metrics = std::move(m);
  return result;
}

RunResult run_single_tree(const SimConfig& config) {
  using baselines::StKind;
  using baselines::StMessage;
  const Graph& g = config.graph;
  const std::size_t n = g.size();
  std::vector<baselines::StNode> nodes;
  nodes.reserve(n);
  for (NodeId i = 0; i < n; ++i) nodes.push_back(baselines::init_st_node(i, g.neighbors(i)));

  Inboxes<StMessage> inbox(n);
  std::vector<StMessage> in_flight;
  std::vector<StMessage> next;
  std::vector<Round> completion(n, 0);
  RunMetrics m;
  m.algorithm = Algorithm::SingleTree;
  Round executed = 0;
  const Round t_max = config.t_max();
  for (Round t = 0; t < t_max; ++t) {
    for (auto& box : inbox) box.clear();
    for (const StMessage& msg : in_flight) {
      if (msg.kind == StKind::Count) {
        inbox[msg.target].push_back(&msg);
      } else {
        for (NodeId j : g.neighbors(msg.sender)) inbox[j].push_back(&msg);
      }
    }
    next.clear();
    for (auto& node : nodes) {
      if (t > 0 && inbox[node.id].empty()) continue;
      const std::uint64_t before = node.computed_size;
      try {
        for (StMessage& out : baselines::st_step(node, inbox[node.id], t)) {
          ++(out.kind == StKind::Query ? m.baseline.query_messages : m.baseline.count_messages);
          next.push_back(std::move(out));
        }
      } catch (const ProtocolError& e) {
        rethrow_at("round " + std::to_string(t), e);
      }
      if (node.computed_size != before) completion[node.id] = t;
    }
    std::stable_sort(next.begin(), next.end(), baselines::st_inbox_less);
    std::swap(in_flight, next);
    executed = t + 1;
    if (config.early_stop && in_flight.empty()) break;
  }

  RunResult result;
  result.pre_iteration_rounds = 0;
  result.rounds_executed = executed;
  const std::uint64_t bits = id_bits(n);
  std::uint64_t min_sent = UINT64_MAX;
  for (const auto& node : nodes) {
    result.final_counts.emplace_back(static_cast<unsigned long>(node.computed_size));
    m.memory_bits_per_node.push_back(node.queries.size() * 2 * bits + g.degree(node.id) * n);
    m.memory_formula_bits = std::max(m.memory_formula_bits,
                                     memory_estimate(Algorithm::SingleTree, n, g.degree(node.id), 0));
    for (const auto& [q, rec] : node.queries) min_sent = std::min(min_sent, rec.sent);
    if (node.queries.size() != n) m.baseline.spanning_trees_valid = false;
  }
  m.baseline.min_messages_per_node_query = min_sent == UINT64_MAX ? 0 : min_sent;

  // Parent links of every query must form a tree rooted at the origin.
  std::vector<std::uint32_t> mark(n, UINT32_MAX);
  for (NodeId q = 0; q < n && m.baseline.spanning_trees_valid; ++q) {
    mark[q] = q;
    for (NodeId start = 0; start < n && m.baseline.spanning_trees_valid; ++start) {
      std::vector<NodeId> path;
      NodeId v = start;
      while (mark[v] != q) {
        auto it = nodes[v].queries.find(q);
        if (it == nodes[v].queries.end() || !it->second.parent || !g.adjacent(v, *it->second.parent) ||
            path.size() > n) {
          m.baseline.spanning_trees_valid = false;
          break;
        }
        path.push_back(v);
        v = *it->second.parent;
      }
      for (NodeId p : path) mark[p] = q;
    }
  }

  m.baseline.envelopes = m.baseline.query_messages + m.baseline.count_messages;
  m.m_total = m.baseline.envelopes;
  m.baseline.max_query_completion = *std::max_element(completion.begin(), completion.end());
  m.t_total = m.baseline.max_query_completion;
  m.t_broadcast = m.t_total;
  m.residue_fraction = 0;
  m.avg_degree = average_degree(g);
  m.correct = std::all_of(result.final_counts.begin(), result.final_counts.end(),
                          [&](const ExactCount& v) { return v == ExactCount(n); });
  result.t_converged = m.t_total;
  result.metrics = std::move(m);
  return result;
}

}  // namespace

RunResult run(const SimConfig& config) {
  validate(config);
  switch (config.algorithm) {
    case Algorithm::AnB: return run_anb(config);
    case Algorithm::All2All: return run_all2all(config);
    case Algorithm::SingleTree: return run_single_tree(config);
  }
  throw ConfigError("unknown algorithm");
}

std::pair<RunResult, OracleReport> run_with_oracle(SimConfig config) {
  if (config.algorithm != Algorithm::AnB) throw ConfigError("the oracle applies to AnB runs only");
  config.trace_level = TraceLevel::Full;
  RunResult result = run(config);
  OracleReport report = evaluate(*result.trace, config.graph);
  if (!report.all_passed()) throw OracleViolation(std::move(report));
  return {std::move(result), std::move(report)};
}

}  // namespace anb
