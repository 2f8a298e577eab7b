#pragma once

#include "anb/graph.hpp"
#include "anb/rational.hpp"
#include "anb/trace.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace anb {

enum class Algorithm : std::uint8_t { AnB, All2All, SingleTree };

// "anb", "all2all", "st".
std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> algorithm_from_name(std::string_view name);

// Extra figures that only the baselines produce.
struct BaselineMetrics {
  std::uint64_t envelopes = 0;       // messages sent, one per (sender, round) for All-2-All
  std::uint64_t id_broadcasts = 0;   // All-2-All: ids carried, summed over envelopes
  std::uint64_t query_messages = 0;  // ST
  std::uint64_t count_messages = 0;  // ST
  // ST: smallest number of messages any node sent for any one query.
  std::uint64_t min_messages_per_node_query = 0;
  // ST: latest round at which an origin's computed size reached its final value.
  Round max_query_completion = 0;
  bool spanning_trees_valid = true;  // ST: every query tree spans the graph
  bool operator==(const BaselineMetrics&) const = default;
};

struct RunMetrics {
  Algorithm algorithm = Algorithm::AnB;
  KindCounts messages_by_kind{};
  std::uint64_t m_total = 0;
  Round t_reduction = 0;
  Round t_broadcast = 0;
  Round t_total = 0;
  std::size_t residue_count = 0;
  ExactCount residue_fraction;
  ExactCount avg_degree;
  std::vector<std::uint64_t> memory_bits_per_node;
  std::uint64_t memory_formula_bits = 0;  // max over nodes of memory_estimate
  bool correct = false;
  BaselineMetrics baseline;

  std::uint64_t m(std::size_t k) const { return messages_by_kind.at(k - 1); }  // m(1)..m(6)
  std::uint64_t memory_max_bits() const;
  bool operator==(const RunMetrics&) const = default;
};

// Metrics of an AnB run. t_total is the last round in which some n_i changed;
// t_reduction the first round that starts with no node in A or L.
// Throws TraceError if the trace is inconsistent with the graph or never
// reaches reduction.
RunMetrics collect(const RunTrace& trace, const Graph& graph);

// n(4+d) + r(n-1). Throws std::invalid_argument unless 1 <= n, 0 <= r <= n, d >= 0.
ExactCount anb_comm_bound(std::uint64_t n, std::uint64_t r, const ExactCount& d);
// n(4+r+d) - r, the tabulated form.
ExactCount anb_comm_bound_table(std::uint64_t n, std::uint64_t r, const ExactCount& d);

// n(1-x) + x - 4: AnB sends fewer messages than All-2-All iff d is below this.
ExactCount comm_threshold(std::uint64_t n, const ExactCount& x);

// Memory in bits, rounded up, with log base 2:
//   AnB (2 d_i + r + 5) log n, All-2-All n log n, ST 2n log n + d_i n.
// Throws std::invalid_argument for n = 0.
std::uint64_t memory_estimate(Algorithm algorithm, std::uint64_t n, std::uint64_t d_i, std::uint64_t r);

// Bits needed to write one node id of a network of n nodes (at least 1).
std::uint64_t id_bits(std::uint64_t n);

// CSV: one row per run. Rationals are written as decimals with 6 significant
// digits; x_frac holds x exactly. Baseline rows carry 0 in the AnB-only
// columns (t_reduction, m1..m6, r, x) and their own message total in m_total.
struct CsvContext {
  std::string topology;
  std::uint64_t seed = 0;
  std::uint64_t diameter = 0;
};

std::string csv_header();
std::string csv_row(const RunMetrics& metrics, std::uint64_t n, const CsvContext& context);

}  // namespace anb
