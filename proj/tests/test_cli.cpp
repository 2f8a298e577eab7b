#include "cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace anb;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("anb_cli_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("run on K3 with verification") {
  const Outcome o = invoke({"run", "--family", "complete", "--n", "3", "--algo", "anb", "--verify"});
  CHECK(o.code == cli::kExitOk);
  CHECK(o.out.find("n_i=3 at every node") != std::string::npos);
  CHECK(o.out.find("resting times: 0 2 3 4") != std::string::npos);
  CHECK(o.out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("All-2-All on a path file takes as many rounds as the diameter") {
  TempDir dir;
  const auto file = dir.file("path3.txt");
  std::ofstream(file) << "0 1\n1 2\n";
  const Outcome o = invoke({"run", "--graph-file", file, "--algo", "all2all", "--verify"});
  CHECK(o.code == cli::kExitOk);
  CHECK(o.out.find("t_total=2") != std::string::npos);
  CHECK(o.out.find("baseline checks passed") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({"run", "--family", "er", "--n", "0"}).code == cli::kExitUsage);
  CHECK(invoke({"run", "--family", "lattice", "--n", "5"}).code == cli::kExitUsage);
  CHECK(invoke({"run", "--family", "er"}).code == cli::kExitUsage);
  CHECK(invoke({"run", "--n", "5"}).code == cli::kExitUsage);
  CHECK(invoke({"run", "--family", "er", "--n", "5", "--algo", "gossip"}).code == cli::kExitUsage);
  CHECK(invoke({"run", "--family", "er", "--n", "5", "--algo", "st", "--trace", "x.txt"}).code == cli::kExitUsage);
  CHECK(invoke({"run", "--family", "er", "--n", "5", "--mode", "sum"}).code == cli::kExitUsage);
  CHECK(invoke({"run", "--family", "er", "--n", "5", "--nmax-slack", "0.5"}).code == cli::kExitUsage);
  CHECK(invoke({"run", "--graph-file", "/nonexistent/graph.txt"}).code == cli::kExitUsage);
  CHECK(invoke({"run", "--bogus"}).code == cli::kExitUsage);
  CHECK(invoke({"sweep", "--csv", "x.csv", "--sizes", "100,50"}).code == cli::kExitUsage);
  CHECK(invoke({"sweep", "--csv", "x.csv", "--repeats", "0"}).code == cli::kExitUsage);
  CHECK(invoke({"sweep"}).code == cli::kExitUsage);
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"--help"}).code == cli::kExitOk);
}

TEST_CASE("every algorithm verifies on a random graph") {
  for (const char* algo : {"anb", "all2all", "st"}) {
    CAPTURE(algo);
    CHECK(invoke({"run", "--family", "ws", "--n", "60", "--seed", "4", "--algo", algo, "--verify"}).code == 0);
  }
}

TEST_CASE("sum mode reads one rational per line") {
  TempDir dir;
  const auto values = dir.file("values.txt");
  std::ofstream(values) << "2\n3\n5\n";
  const Outcome o = invoke({"run", "--family", "complete", "--n", "3", "--mode", "sum", "--values", values, "--verify"});
  CHECK(o.code == 0);
  CHECK(o.out.find("n_i=10 at every node") != std::string::npos);

  std::ofstream(values) << "1/2\n0.25\n";
  const Outcome wrong = invoke({"run", "--family", "complete", "--n", "3", "--mode", "sum", "--values", values});
  CHECK(wrong.code == cli::kExitUsage);
}

TEST_CASE("trace file holds the per-round dump and the oracle section") {
  TempDir dir;
  const auto trace = dir.file("k3.trace");
  CHECK(invoke({"run", "--family", "complete", "--n", "3", "--trace", trace}).code == 0);
  const auto content = slurp(trace);
  CHECK(content.rfind("t=0 node=0 state=A e=2 c=1/1 n=0/1 emitted=leaf:2\n", 0) == 0);
  CHECK(content.find("t=2 node=1 state=R e=0 c=1/1 n=0/1 emitted=broadcast:2\n") != std::string::npos);
  CHECK(content.find("t=3 node=2 state=I e=0 c=1/1 n=1/1 emitted=broadcast:4\n") != std::string::npos);
  CHECK(content.find("[oracle]\n") != std::string::npos);
  CHECK(content.find("all_passed=true\n") != std::string::npos);
}

TEST_CASE("ANB_SEED supplies the default seed") {
  ::setenv("ANB_SEED", "77", 1);
  const Outcome env = invoke({"run", "--family", "er", "--n", "30"});
  ::unsetenv("ANB_SEED");
  CHECK(env.code == 0);
  CHECK(env.out.find("seed=77") != std::string::npos);
  const Outcome flag = invoke({"run", "--family", "er", "--n", "30", "--seed", "77"});
  CHECK(flag.out == env.out);
  const Outcome fallback = invoke({"run", "--family", "er", "--n", "30"});
  CHECK(fallback.out.find("seed=1\n") != std::string::npos);
}

TEST_CASE("a one-run sweep matches the single run") {
  TempDir dir;
  const auto sweep_csv = dir.file("sweep.csv");
  const auto run_csv = dir.file("run.csv");
  for (const char* algo : {"anb", "all2all", "st"}) {
    CAPTURE(algo);
    REQUIRE(invoke({"sweep", "--family", "rgg", "--sizes", "80", "--repeats", "1", "--algo", algo, "--csv", sweep_csv})
                .code == 0);
    const std::string seed = std::to_string(cli::derive_seed(1, "rgg", 80, 0));
    REQUIRE(invoke({"run", "--family", "rgg", "--n", "80", "--seed", seed, "--algo", algo, "--csv", run_csv}).code == 0);
    const auto a = lines(slurp(sweep_csv));
    const auto b = lines(slurp(run_csv));
    REQUIRE(a.size() == 2);
    CHECK(a == b);
    CHECK(fs::exists(dir.path / "sweep_aggregate.csv"));
  }
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
  TempDir dir;
  const std::vector<std::string> base{"sweep", "--family", "ba", "--family", "ws", "--sizes", "20,40",
                                      "--repeats", "3", "--algo", "anb", "--algo", "all2all", "--algo", "st"};
  auto first = base;
  first.insert(first.end(), {"--csv", dir.file("a.csv"), "--threads", "1"});
  auto second = base;
  second.insert(second.end(), {"--csv", dir.file("b.csv"), "--threads", "3"});
  REQUIRE(invoke(first).code == 0);
  REQUIRE(invoke(second).code == 0);
  CHECK(slurp(dir.path / "a.csv") == slurp(dir.path / "b.csv"));
  CHECK(slurp(dir.path / "a_aggregate.csv") == slurp(dir.path / "b_aggregate.csv"));
  CHECK(lines(slurp(dir.path / "a.csv")).size() == 1 + 2 * 2 * 3 * 3);
  const auto agg = lines(slurp(dir.path / "a_aggregate.csv"));
  REQUIRE(agg.size() == 1 + 2 * 2 * 3);
  CHECK(agg[0] == "topology,n,algorithm,runs,t_total_mean,t_total_ci_low,t_total_ci_high,x_mean,x_ci_low,x_ci_high");
  CHECK(agg[1].rfind("ba,20,anb,3,", 0) == 0);
}

TEST_CASE("sweep removes its outputs when writing fails") {
  TempDir dir;
  const auto target = dir.file("missing/out.csv");
  const Outcome o = invoke({"sweep", "--family", "er", "--sizes", "10", "--repeats", "1", "--csv", target});
  CHECK(o.code == cli::kExitFailure);
  CHECK_FALSE(fs::exists(target));
}

TEST_CASE("verification corpus") {
  const Outcome all = invoke({"verify"});
  CHECK(all.code == 0);
  CHECK(all.out.find("verified 109 graphs") != std::string::npos);

  const Outcome capped = invoke({"verify", "--n-cap", "50"});
  CHECK(capped.code == 0);
  for (const auto& e : cli::verification_corpus(50)) CHECK(e.n <= 50);

  const Outcome broken = invoke({"verify", "--fault-injection"});
  CHECK(broken.code == cli::kExitFailure);
  CHECK(broken.err.find("theorem2_conservation") != std::string::npos);
}

TEST_CASE("corpus covers every family") {
  std::set<std::string> names;
  for (const auto& e : cli::verification_corpus()) {
    names.insert(family_name(e.family));
    CHECK(e.n <= 200);
  }
  CHECK(names == std::set<std::string>{"ba", "er", "ws", "rgg", "star", "complete", "path", "ring"});
}

TEST_CASE("derived seeds") {
  CHECK(cli::derive_seed(1, "ba", 100, 0) == cli::derive_seed(1, "ba", 100, 0));
  CHECK(cli::derive_seed(1, "ba", 100, 0) != cli::derive_seed(1, "ba", 100, 1));
  CHECK(cli::derive_seed(1, "ba", 100, 0) != cli::derive_seed(1, "er", 100, 0));
  CHECK(cli::derive_seed(1, "ba", 100, 0) != cli::derive_seed(2, "ba", 100, 0));
  CHECK((cli::derive_seed(5, "ws", 10, 3) ^ cli::derive_seed(9, "ws", 10, 3)) == (5u ^ 9u));
}

TEST_CASE("sweep job order") {
  cli::SweepSpec spec;
  spec.families = {"er", "ba"};
  spec.sizes = {10, 20};
  spec.repeats = 2;
  spec.algorithms = {Algorithm::AnB, Algorithm::SingleTree};
  spec.output = "x.csv";
  const auto jobs = cli::sweep_jobs(spec);
  REQUIRE(jobs.size() == 16);
  CHECK(jobs[0].family == "er");
  CHECK(jobs[1].algorithm == Algorithm::SingleTree);
  CHECK(jobs[0].seed == jobs[1].seed);
  CHECK(jobs[2].repeat == 1);
  CHECK(jobs[4].n == 20);
  CHECK(jobs[8].family == "ba");
  CHECK(cli::aggregate_path("out/runs.csv") == fs::path("out/runs_aggregate.csv"));
}

TEST_CASE("aggregate statistics") {
  std::vector<cli::SweepRow> rows(3);
  const Round t[] = {10, 12, 14};
  for (int i = 0; i < 3; ++i) {
    rows[i].job = {"er", 50, static_cast<std::size_t>(i), Algorithm::AnB, 0};
    rows[i].metrics.t_total = t[i];
    rows[i].metrics.residue_fraction = ExactCount(i, 10);
  }
  const auto out = lines(cli::aggregate_csv(rows));
  REQUIRE(out.size() == 2);
  // sd of t is 2, half width 1.96 * 2 / sqrt(3); sd of x is 0.1.
  CHECK(out[1] == "er,50,anb,3,12,9.73679,14.2632,0.1,-0.0131607,0.213161");
}
