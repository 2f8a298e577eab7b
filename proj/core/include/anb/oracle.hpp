#pragma once

#include "anb/graph.hpp"
#include "anb/trace.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace anb {

// Phase sets of every recorded round, from the start-of-round snapshots.
struct PhasePartition {
  std::vector<std::vector<NodeId>> active;      // A(t)
  std::vector<std::vector<NodeId>> leaves;      // B(t)
  std::vector<std::vector<NodeId>> residues;    // C(t)
  std::vector<std::vector<NodeId>> cumulative;  // P(t), ascending ids
  std::vector<std::size_t> n_active, n_leaves, n_residues, r;
};

// Requires a full trace.
PhasePartition partition(const RunTrace& trace);

struct OracleCheck {
  std::string name;
  bool passed = true;
  std::string detail;  // first failure locus, or a short summary on success
};

struct OracleReport {
  std::vector<Round> resting_times;
  std::vector<OracleCheck> checks;
  std::optional<Round> t_R;          // first round that starts with no active or leaf node
  std::optional<Round> t_converged;  // last round in which some n_i changed
  std::optional<Round> first_inactive_round;  // first round with N_A = 0
  bool within_3n = false;            // first_inactive_round <= 3N

  bool all_passed() const;
  const OracleCheck* find(const std::string& name) const;
  const OracleCheck* first_failure() const;
};

// Names of the checks, in report order.
inline constexpr const char* kCheckLemma1 = "lemma1_rest_at_0";
inline constexpr const char* kCheckResult2 = "result2_spacing";
inline constexpr const char* kCheckResult3 = "result3_active_decrease";
inline constexpr const char* kCheckCorollary2 = "corollary2_residue_timing";
inline constexpr const char* kCheckTheorem1 = "theorem1_local_view";
inline constexpr const char* kCheckTheorem2 = "theorem2_conservation";
inline constexpr const char* kCheckReduction = "reduction_by_3n_plus_2";
inline constexpr const char* kCheckConvergence = "convergence_by_4n_plus_1";

class OracleViolation : public std::runtime_error {
 public:
  explicit OracleViolation(OracleReport report);
  const OracleReport& report() const { return report_; }

 private:
  OracleReport report_;
};

// Rounds t with no count message delivered and no node in L.
std::vector<Round> detect_resting_times(const RunTrace& trace);

// I(T) = sum of c over A(T) and P(T) equals the expected total at every
// resting time T.
OracleCheck check_conservation(const RunTrace& trace, const std::vector<Round>& resting_times);

// Reduction by 3N+2, convergence within 4N+1 rounds, resting-time spacing,
// N_A decrease, residue timing and the local-view theorem. One entry per
// check, Lemma 1 included.
std::vector<OracleCheck> check_bounds(const RunTrace& trace, const Graph& graph,
                                      const std::vector<Round>& resting_times);

// Every check above, in report order.
OracleReport evaluate(const RunTrace& trace, const Graph& graph);

// Multi-line human-readable summary.
void write_report_text(std::ostream& os, const OracleReport& report);
// Flat key=value lines, preceded by an "[oracle]" header line.
void write_report_kv(std::ostream& os, const OracleReport& report);

}  // namespace anb
