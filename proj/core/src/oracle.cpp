#include "anb/oracle.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>

namespace anb {

bool OracleReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
}

const OracleCheck* OracleReport::find(const std::string& name) const {
  for (const OracleCheck& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

const OracleCheck* OracleReport::first_failure() const {
  for (const OracleCheck& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

namespace {

std::string describe_failure(const OracleReport& report) {
  const OracleCheck* f = report.first_failure();
  if (!f) return "oracle violation";
  return "oracle violation: " + f->name + ": " + f->detail;
}

void require_full(const RunTrace& trace) {
  if (trace.level != TraceLevel::Full) throw TraceError("oracle needs a full trace");
  for (const RoundTrace& rt : trace.rounds) {
    if (rt.nodes.size() != trace.node_count) throw TraceError("round without node snapshots");
  }
  if (trace.final_nodes.size() != trace.node_count) throw TraceError("trace without final snapshot");
}

// Local state after round t has run, i.e. the snapshot at the start of t+1.
const NodeSnapshot& after_round(const RunTrace& trace, std::size_t t, NodeId i) {
  return t + 1 < trace.rounds.size() ? trace.rounds[t + 1].nodes[i] : trace.final_nodes[i];
}

void fail(OracleCheck& check, const std::string& detail) {
  if (!check.passed) return;
  check.passed = false;
  check.detail = detail;
}

}  // namespace

OracleViolation::OracleViolation(OracleReport report)
    : std::runtime_error(describe_failure(report)), report_(std::move(report)) {}

PhasePartition partition(const RunTrace& trace) {
  require_full(trace);
  PhasePartition p;
  const std::size_t rounds = trace.rounds.size();
  p.active.resize(rounds);
  p.leaves.resize(rounds);
  p.residues.resize(rounds);
  p.cumulative.resize(rounds);
  std::set<NodeId> seen;
  for (std::size_t t = 0; t < rounds; ++t) {
    const auto& nodes = trace.rounds[t].nodes;
    for (NodeId i = 0; i < nodes.size(); ++i) {
      switch (nodes[i].state) {
        case NodeState::Active: p.active[t].push_back(i); break;
        case NodeState::Leaf: p.leaves[t].push_back(i); break;
        case NodeState::Residue:
          p.residues[t].push_back(i);
          seen.insert(i);
          break;
        case NodeState::Inactive: break;
      }
    }
    p.cumulative[t].assign(seen.begin(), seen.end());
    p.n_active.push_back(p.active[t].size());
    p.n_leaves.push_back(p.leaves[t].size());
    p.n_residues.push_back(p.residues[t].size());
    p.r.push_back(seen.size());
  }
  return p;
}

std::vector<Round> detect_resting_times(const RunTrace& trace) {
  if (trace.level == TraceLevel::None) throw TraceError("trace lacks message-kind data");
  std::vector<Round> out;
  for (const RoundTrace& rt : trace.rounds) {
    if (at(rt.delivered, MessageKind::Count) == 0 && rt.in_state(NodeState::Leaf) == 0) {
      out.push_back(rt.round);
    }
  }
  return out;
}

OracleCheck check_conservation(const RunTrace& trace, const std::vector<Round>& resting_times) {
  require_full(trace);
  OracleCheck check{kCheckTheorem2, true, ""};
  const PhasePartition p = partition(trace);
  std::optional<Round> previous;
  for (Round T : resting_times) {
    const auto& nodes = trace.rounds[T].nodes;
    ExactCount total = 0;
    for (NodeId i : p.active[T]) total += nodes[i].count;
    for (NodeId i : p.cumulative[T]) total += nodes[i].count;
    if (total != trace.expected_total) {
      std::ostringstream os;
      os << "round " << T << ": I = " << to_fraction_string(total) << ", expected "
         << to_fraction_string(trace.expected_total);
      if (previous) {
        for (NodeId i = 0; i < nodes.size(); ++i) {
          if (nodes[i].count != trace.rounds[*previous].nodes[i].count) {
            os << "; node " << i << " count moved from " << to_fraction_string(trace.rounds[*previous].nodes[i].count)
               << " to " << to_fraction_string(nodes[i].count);
            break;
          }
        }
      }
      fail(check, os.str());
      break;
    }
    previous = T;
  }
  if (check.passed) check.detail = std::to_string(resting_times.size()) + " resting times checked";
  return check;
}

std::vector<OracleCheck> check_bounds(const RunTrace& trace, const Graph& graph,
                                      const std::vector<Round>& resting_times) {
  require_full(trace);
  const PhasePartition p = partition(trace);
  const std::size_t n = graph.size();
  const Round last = static_cast<Round>(trace.rounds.size()) - 1;
  std::set<Round> resting(resting_times.begin(), resting_times.end());

  OracleCheck lemma1{kCheckLemma1, true, ""};
  if (!resting.contains(0)) fail(lemma1, "round 0 is not a resting time");

  OracleCheck spacing{kCheckResult2, true, ""};
  OracleCheck decrease{kCheckResult3, true, ""};
  for (std::size_t k = 0; k < resting_times.size(); ++k) {
    const Round T = resting_times[k];
    const std::size_t active = p.n_active[T];
    if (k + 1 < resting_times.size()) {
      const Round next = resting_times[k + 1];
      if (active > 0 && next - T > 3) {
        fail(spacing, "resting times " + std::to_string(T) + " and " + std::to_string(next) + " are " +
                          std::to_string(next - T) + " rounds apart");
      }
      const std::size_t next_active = p.n_active[next];
      if (active > 0 ? next_active >= active : next_active != 0) {
        fail(decrease, "N_A went from " + std::to_string(active) + " at round " + std::to_string(T) + " to " +
                           std::to_string(next_active) + " at round " + std::to_string(next));
      }
    } else if (active > 0 && T + 3 <= last) {
      fail(spacing, "no resting time within 3 rounds after " + std::to_string(T));
    }
  }

  OracleCheck residue_timing{kCheckCorollary2, true, ""};
  for (Round t = 0; t <= last; ++t) {
    if (p.n_residues[t] == 0) continue;
    const Round T = t - 2;
    if (T < 0 || !resting.contains(T) || p.n_active[T] == 0) {
      fail(residue_timing, "round " + std::to_string(t) + ": node " + std::to_string(p.residues[t].front()) +
                               " is a residue but round " + std::to_string(T) +
                               " is not a resting time with active nodes");
    }
  }

  OracleCheck local_view{kCheckTheorem1, true, ""};
  std::vector<char> is_active(n);
  for (Round T : resting_times) {
    if (p.n_active[T] == 0 || !local_view.passed) continue;
    std::fill(is_active.begin(), is_active.end(), 0);
    for (NodeId i : p.active[T]) is_active[i] = 1;
    const auto gamma = [&](NodeId i) {
      std::int64_t g = 0;
      for (NodeId j : graph.neighbors(i)) g += is_active[j];
      return g;
    };
    for (NodeId i : p.active[T]) {
      const NodeSnapshot& view = after_round(trace, static_cast<std::size_t>(T), i);
      const std::string locus = "round " + std::to_string(T) + " node " + std::to_string(i) + ": ";
      if (view.effective_degree != gamma(i)) {
        fail(local_view, locus + "e = " + std::to_string(view.effective_degree) + ", active neighbors = " +
                             std::to_string(gamma(i)));
        break;
      }
      std::size_t listed = 0;
      for (NodeId j : graph.neighbors(i)) {
        if (!is_active[j]) continue;
        ++listed;
        auto it = view.effective_neighborhood.find(j);
        if (it == view.effective_neighborhood.end()) {
          fail(local_view, locus + "active neighbor " + std::to_string(j) + " missing from E");
          break;
        }
        if (it->second != gamma(j)) {
          fail(local_view, locus + "E holds " + std::to_string(it->second) + " for " + std::to_string(j) +
                               ", true value " + std::to_string(gamma(j)));
          break;
        }
      }
      if (local_view.passed && listed != view.effective_neighborhood.size()) {
        fail(local_view, locus + "E lists a neighbor that is not active");
      }
      if (!local_view.passed) break;
    }
  }

  OracleCheck reduction{kCheckReduction, true, ""};
  std::optional<Round> t_R;
  for (Round t = 0; t <= last; ++t) {
    if (p.n_active[t] == 0 && p.n_leaves[t] == 0) {
      t_R = t;
      break;
    }
  }
  const Round reduction_bound = 3 * static_cast<Round>(n) + 2;
  if (!t_R) {
    fail(reduction, "active or leaf nodes remain in every recorded round");
  } else if (*t_R > reduction_bound) {
    fail(reduction, "t_R = " + std::to_string(*t_R) + " > 3N+2 = " + std::to_string(reduction_bound));
  } else {
    reduction.detail = "t_R = " + std::to_string(*t_R);
  }

  OracleCheck convergence{kCheckConvergence, true, ""};
  Round last_change = -1;
  for (const RoundTrace& rt : trace.rounds)
    if (rt.final_count_changes > 0) last_change = rt.round;
  const Round budget = 4 * static_cast<Round>(n) + 1;
  for (NodeId i = 0; i < n; ++i) {
    if (trace.final_counts[i] != trace.expected_total) {
      fail(convergence, "node " + std::to_string(i) + " ends with n = " + to_fraction_string(trace.final_counts[i]));
      break;
    }
  }
  if (convergence.passed && last_change + 1 > budget) {
    fail(convergence, "last change in round " + std::to_string(last_change) + ", budget " + std::to_string(budget) +
                          " rounds");
  }

  return {lemma1, spacing, decrease, residue_timing, local_view, reduction, convergence};
}

OracleReport evaluate(const RunTrace& trace, const Graph& graph) {
  require_full(trace);
  if (graph.size() != trace.node_count) throw TraceError("trace does not match the graph size");
  OracleReport report;
  report.resting_times = detect_resting_times(trace);
  auto bounds = check_bounds(trace, graph, report.resting_times);
  OracleCheck conservation = check_conservation(trace, report.resting_times);
  // report order: lemma 1, result 2, result 3, corollary 2, theorem 1, theorem 2, bounds
  report.checks.assign(bounds.begin(), bounds.begin() + 5);
  report.checks.push_back(std::move(conservation));
  report.checks.insert(report.checks.end(), bounds.begin() + 5, bounds.end());

  for (const RoundTrace& rt : trace.rounds) {
    if (!report.t_R && rt.in_state(NodeState::Active) == 0 && rt.in_state(NodeState::Leaf) == 0) report.t_R = rt.round;
    if (!report.first_inactive_round && rt.in_state(NodeState::Active) == 0) report.first_inactive_round = rt.round;
    if (rt.final_count_changes > 0) report.t_converged = rt.round;
  }
  report.within_3n = report.first_inactive_round &&
                     *report.first_inactive_round <= 3 * static_cast<Round>(graph.size());
  return report;
}

namespace {

std::string optional_round(const std::optional<Round>& r) { return r ? std::to_string(*r) : "none"; }

}  // namespace

void write_report_text(std::ostream& os, const OracleReport& report) {
  os << "oracle report\n  resting times:";
  for (Round T : report.resting_times) os << ' ' << T;
  os << "\n  t_R: " << optional_round(report.t_R) << "\n  t_converged: " << optional_round(report.t_converged)
     << "\n  first round without active nodes: " << optional_round(report.first_inactive_round)
     << (report.within_3n ? " (within 3N)" : " (beyond 3N)") << '\n';
  for (const OracleCheck& c : report.checks) {
    os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
}

void write_report_kv(std::ostream& os, const OracleReport& report) {
  os << "[oracle]\nresting_times=";
  for (std::size_t k = 0; k < report.resting_times.size(); ++k) os << (k ? "," : "") << report.resting_times[k];
  os << "\nt_R=" << optional_round(report.t_R) << "\nt_converged=" << optional_round(report.t_converged)
     << "\nfirst_inactive_round=" << optional_round(report.first_inactive_round)
     << "\nwithin_3n=" << (report.within_3n ? "true" : "false") << '\n';
  for (const OracleCheck& c : report.checks) {
    os << "check." << c.name << '=' << (c.passed ? "pass" : "fail") << '\n';
    if (!c.passed) os << "check." << c.name << ".detail=" << c.detail << '\n';
  }
  os << "all_passed=" << (report.all_passed() ? "true" : "false") << '\n';
}

}  // namespace anb
