#include "support.hpp"

#include "anb/oracle.hpp"

#include "cli.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace anb;

namespace {

RunTrace full_trace(const Graph& g) {
  SimConfig config(g);
  config.trace_level = TraceLevel::Full;
  return *run(config).trace;
}

const std::vector<const char*> kAllChecks{kCheckLemma1,    kCheckResult2,  kCheckResult3,   kCheckCorollary2,
                                          kCheckTheorem1,  kCheckTheorem2, kCheckReduction, kCheckConvergence};

}  // namespace

TEST_CASE("resting times of K3 and the star") {
  CHECK(detect_resting_times(full_trace(test::k3())) == std::vector<Round>{0, 2, 3, 4});
  const auto star = detect_resting_times(full_trace(test::star5()));
  CHECK(star == std::vector<Round>{0, 3, 5, 6, 7});
  // Counts are delivered at round 2.
  CHECK(std::find(star.begin(), star.end(), 2) == star.end());
}

TEST_CASE("resting-time detection needs message data") {
  RunTrace t = full_trace(test::k3());
  t.level = TraceLevel::None;
  CHECK_THROWS_AS(detect_resting_times(t), TraceError);
}

TEST_CASE("checks need a full trace") {
  SimConfig config(test::k3());
  const RunTrace metrics_only = *run(config).trace;
  CHECK_THROWS_AS(evaluate(metrics_only, test::k3()), TraceError);
  CHECK_THROWS_AS(partition(metrics_only), TraceError);
  CHECK_THROWS_AS(evaluate(full_trace(test::k3()), test::star5()), TraceError);
}

TEST_CASE("K3 report") {
  const RunTrace t = full_trace(test::k3());
  const OracleReport r = evaluate(t, test::k3());
  CHECK(r.all_passed());
  REQUIRE(r.checks.size() == kAllChecks.size());
  for (std::size_t k = 0; k < kAllChecks.size(); ++k) CHECK(r.checks[k].name == kAllChecks[k]);
  CHECK(r.t_R == Round{2});
  CHECK(*r.t_R <= 3 * 3);
  CHECK(r.t_converged == Round{3});
  CHECK(r.first_inactive_round == Round{1});
  CHECK(r.within_3n);
  CHECK(r.first_failure() == nullptr);
}

TEST_CASE("conservation at the first resting time of K3") {
  const RunTrace t = full_trace(test::k3());
  ExactCount total = 0;
  for (const auto& node : t.rounds[0].nodes) total += node.count;
  CHECK(total == 3);
  CHECK(check_conservation(t, {0}).passed);
}

TEST_CASE("star conserves its count in the residue") {
  const RunTrace t = full_trace(test::star5());
  const PhasePartition p = partition(t);
  CHECK(p.cumulative[5] == std::vector<NodeId>{0});
  CHECK(p.active[5].empty());
  CHECK(t.rounds[5].nodes[0].count == 5);
  CHECK(check_conservation(t, detect_resting_times(t)).passed);
}

TEST_CASE("path of three passes every check") {
  const OracleReport r = evaluate(full_trace(test::path3()), test::path3());
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
  }
}

TEST_CASE("phase partition invariants") {
  for (const std::string name : {"ba", "er", "ws", "rgg"}) {
    const Graph g = generate(family_from_name(name), 90, 12);
    const PhasePartition p = partition(full_trace(g));
    for (std::size_t t = 0; t + 1 < p.active.size(); ++t) {
      std::vector<NodeId> next;
      std::set_union(p.active[t + 1].begin(), p.active[t + 1].end(), p.leaves[t + 1].begin(),
                     p.leaves[t + 1].end(), std::back_inserter(next));
      CHECK(p.active[t] == next);
      CHECK(std::includes(p.leaves[t].begin(), p.leaves[t].end(), p.residues[t + 1].begin(),
                          p.residues[t + 1].end()));
      CHECK(std::includes(p.cumulative[t + 1].begin(), p.cumulative[t + 1].end(), p.cumulative[t].begin(),
                          p.cumulative[t].end()));
      CHECK(p.r[t] == p.cumulative[t].size());
    }
  }
}

TEST_CASE("random graphs pass every check with spacing of at most three") {
  for (const std::string name : {"ba", "er", "ws", "rgg"}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Graph g = generate(family_from_name(name), 20 * seed, seed);
      const RunTrace t = full_trace(g);
      const OracleReport r = evaluate(t, g);
      CAPTURE(name);
      CAPTURE(seed);
      CHECK(r.all_passed());
      const PhasePartition p = partition(t);
      for (std::size_t k = 0; k + 1 < r.resting_times.size(); ++k) {
        if (p.n_active[r.resting_times[k]] > 0) CHECK(r.resting_times[k + 1] - r.resting_times[k] <= 3);
      }
    }
  }
}

TEST_CASE("doubled count payloads break conservation") {
  SimConfig config(test::path3());
  config.fault_injector = cli::double_count_payloads;
  config.trace_level = TraceLevel::Full;
  const RunResult result = run(config);
  const OracleReport r = evaluate(*result.trace, test::path3());
  const OracleCheck* c = r.find(kCheckTheorem2);
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->passed);
  CHECK(c->detail.find("round 3") != std::string::npos);
  CHECK(c->detail.find("node 1") != std::string::npos);
  CHECK_FALSE(r.all_passed());

  CHECK_THROWS_AS(run_with_oracle(config), OracleViolation);
  try {
    run_with_oracle(config);
  } catch (const OracleViolation& e) {
    CHECK(std::string(e.what()).find(kCheckTheorem2) != std::string::npos);
    CHECK_FALSE(e.report().all_passed());
  }
}

TEST_CASE("a tampered local view fails the local-view check") {
  const Graph g = test::star5();
  RunTrace t = full_trace(g);
  t.rounds[1].nodes[0].effective_neighborhood[1] = 7;
  const OracleReport r = evaluate(t, g);
  CHECK_FALSE(r.find(kCheckTheorem1)->passed);
  CHECK(r.find(kCheckTheorem1)->detail.find("node 0") != std::string::npos);
}

TEST_CASE("a residue outside the allowed rounds fails the timing check") {
  const Graph g = test::star5();
  RunTrace t = full_trace(g);
  t.rounds[3].nodes[2].state = NodeState::Residue;
  ++t.rounds[3].state_counts[static_cast<std::size_t>(NodeState::Residue)];
  --t.rounds[3].state_counts[static_cast<std::size_t>(NodeState::Inactive)];
  CHECK_FALSE(evaluate(t, g).find(kCheckCorollary2)->passed);
}

TEST_CASE("a trace that never reduces fails the reduction and convergence bounds") {
  const Graph g = test::path3();
  RunTrace t = full_trace(g);
  for (auto& rt : t.rounds) {
    if (rt.nodes[1].state != NodeState::Active) {
      --rt.state_counts[static_cast<std::size_t>(rt.nodes[1].state)];
      ++rt.state_counts[static_cast<std::size_t>(NodeState::Active)];
      rt.nodes[1].state = NodeState::Active;
    }
  }
  t.final_counts[2] = 2;
  const OracleReport r = evaluate(t, g);
  CHECK_FALSE(r.find(kCheckReduction)->passed);
  CHECK_FALSE(r.find(kCheckConvergence)->passed);
  CHECK(r.find(kCheckConvergence)->detail.find("node 2") != std::string::npos);
}

TEST_CASE("report serializations") {
  const OracleReport r = evaluate(full_trace(test::k3()), test::k3());
  std::ostringstream text, kv;
  write_report_text(text, r);
  write_report_kv(kv, r);
  CHECK(text.str().find("resting times: 0 2 3 4") != std::string::npos);
  CHECK(text.str().find("[pass] theorem2_conservation") != std::string::npos);
  CHECK(kv.str().rfind("[oracle]\n", 0) == 0);
  CHECK(kv.str().find("resting_times=0,2,3,4\n") != std::string::npos);
  CHECK(kv.str().find("t_R=2\n") != std::string::npos);
  for (const char* name : kAllChecks) CHECK(kv.str().find(std::string("check.") + name + "=pass") != std::string::npos);
  CHECK(kv.str().find("all_passed=true") != std::string::npos);
}
