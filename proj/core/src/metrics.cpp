#include "anb/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace anb {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::AnB: return "anb";
    case Algorithm::All2All: return "all2all";
    case Algorithm::SingleTree: return "st";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  if (name == "anb") return Algorithm::AnB;
  if (name == "all2all") return Algorithm::All2All;
  if (name == "st") return Algorithm::SingleTree;
  return std::nullopt;
}

std::uint64_t RunMetrics::memory_max_bits() const {
  if (memory_bits_per_node.empty()) return 0;
  return *std::max_element(memory_bits_per_node.begin(), memory_bits_per_node.end());
}

std::uint64_t id_bits(std::uint64_t n) {
  return n <= 2 ? 1 : static_cast<std::uint64_t>(std::bit_width(n - 1));
}

RunMetrics collect(const RunTrace& trace, const Graph& graph) {
  const std::size_t n = graph.size();
  if (trace.node_count != n || trace.final_counts.size() != n || trace.final_residue_set_sizes.size() != n) {
    throw TraceError("trace does not match the graph size");
  }
  RunMetrics m;
  m.algorithm = Algorithm::AnB;
  m.messages_by_kind = trace.pre_iteration_emitted;
  std::optional<Round> reduction;
  Round last_change = -1;
  for (const RoundTrace& rt : trace.rounds) {
    for (std::size_t k = 0; k < kMessageKindCount; ++k) m.messages_by_kind[k] += rt.emitted[k];
    m.residue_count += rt.in_state(NodeState::Residue);
    if (!reduction && rt.in_state(NodeState::Active) == 0 && rt.in_state(NodeState::Leaf) == 0) {
      reduction = rt.round;
    }
    if (rt.final_count_changes > 0) last_change = rt.round;
  }
  if (!reduction) throw TraceError("trace never reaches a round without active or leaf nodes");
  if (last_change < 0) throw TraceError("no final count ever changed");
  for (std::uint64_t k : m.messages_by_kind) m.m_total += k;
  m.t_reduction = *reduction;
  m.t_total = last_change;
  m.t_broadcast = last_change - *reduction;
  m.residue_fraction = ExactCount(m.residue_count, n);
  m.residue_fraction.canonicalize();
  m.avg_degree = average_degree(graph);

  const std::uint64_t bits = id_bits(n);
  m.memory_bits_per_node.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    m.memory_bits_per_node[i] = (2 * graph.degree(i) + trace.final_residue_set_sizes[i] + 5) * bits;
    m.memory_formula_bits = std::max(m.memory_formula_bits,
                                     memory_estimate(Algorithm::AnB, n, graph.degree(i), m.residue_count));
  }
  m.correct = std::all_of(trace.final_counts.begin(), trace.final_counts.end(),
                          [&](const ExactCount& v) { return v == trace.expected_total; });
  return m;
}

namespace {

void check_bound_args(std::uint64_t n, std::uint64_t r, const ExactCount& d) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (r > n) throw std::invalid_argument("r must not exceed n");
  if (d < 0) throw std::invalid_argument("d must be non-negative");
}

ExactCount q(std::uint64_t v) { return ExactCount(mpz_class(std::to_string(v))); }

}  // namespace

ExactCount anb_comm_bound(std::uint64_t n, std::uint64_t r, const ExactCount& d) {
  check_bound_args(n, r, d);
  return ExactCount(q(n) * (4 + d) + q(r) * (q(n) - 1));
}

ExactCount anb_comm_bound_table(std::uint64_t n, std::uint64_t r, const ExactCount& d) {
  check_bound_args(n, r, d);
  return ExactCount(q(n) * (4 + q(r) + d) - q(r));
}

ExactCount comm_threshold(std::uint64_t n, const ExactCount& x) {
  return ExactCount(q(n) * (1 - x) + x - 4);
}

std::uint64_t memory_estimate(Algorithm algorithm, std::uint64_t n, std::uint64_t d_i, std::uint64_t r) {
  if (n == 0) throw std::invalid_argument("memory estimate needs n >= 1");
  const double lg = std::log2(static_cast<double>(n));
  double bits = 0;
  switch (algorithm) {
    case Algorithm::AnB: bits = static_cast<double>(2 * d_i + r + 5) * lg; break;
    case Algorithm::All2All: bits = static_cast<double>(n) * lg; break;
    case Algorithm::SingleTree:
      bits = 2.0 * static_cast<double>(n) * lg + static_cast<double>(d_i) * static_cast<double>(n);
      break;
  }
  // ceil with a relative tolerance of 1e-9
  return static_cast<std::uint64_t>(std::ceil(bits - 1e-9 * std::max(1.0, bits)));
}

std::string csv_header() {
  return "topology,n,seed,algorithm,t_reduction,t_broadcast,t_total,m1,m2,m3,m4,m5,m6,m_total,"
         "r,x,x_frac,d_avg,diameter,mem_max_bits,mem_formula_bits,correct";
}

std::string csv_row(const RunMetrics& m, std::uint64_t n, const CsvContext& context) {
  std::ostringstream os;
  os << context.topology << ',' << n << ',' << context.seed << ',' << to_string(m.algorithm) << ','
     << m.t_reduction << ',' << m.t_broadcast << ',' << m.t_total;
  for (std::size_t k = 1; k <= kMessageKindCount; ++k) os << ',' << m.m(k);
  os << ',' << m.m_total << ',' << m.residue_count << ',' << to_decimal_string(m.residue_fraction) << ','
     << to_fraction_string(m.residue_fraction) << ',' << to_decimal_string(m.avg_degree) << ','
     << context.diameter << ',' << m.memory_max_bits() << ',' << m.memory_formula_bits << ','
     << (m.correct ? "true" : "false");
  return os.str();
}

}  // namespace anb
