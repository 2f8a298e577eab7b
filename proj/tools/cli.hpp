#pragma once

#include "anb/engine.hpp"
#include "anb/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace anb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Parses argv (without the program name) and runs the selected subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Seed of one sweep run: base_seed xor a hash of (family, n, repeat).
std::uint64_t derive_seed(std::uint64_t base_seed, const std::string& family, std::uint64_t n,
                          std::uint64_t repeat);

struct SweepSpec {
  std::vector<std::string> families{"ba", "er", "ws", "rgg"};
  std::vector<std::size_t> sizes{100, 316, 1000, 3162, 10000};
  std::size_t repeats = 30;
  std::uint64_t base_seed = 1;
  std::vector<Algorithm> algorithms{Algorithm::AnB};
  std::filesystem::path output;
  double nmax_slack = 1.0;
  bool early_stop = true;
  unsigned threads = 0;  // 0: one per hardware thread
};

// Throws std::invalid_argument when the spec is unusable.
void validate(const SweepSpec& spec);

// "<stem>_aggregate.csv" next to the per-run output.
std::filesystem::path aggregate_path(const std::filesystem::path& output);

// One sweep run, identified by its position in spec order.
struct SweepJob {
  std::string family;
  std::size_t n = 0;
  std::size_t repeat = 0;
  Algorithm algorithm = Algorithm::AnB;
  std::uint64_t seed = 0;
};

// Spec order: family, then size, then repeat, then algorithm. Every
// algorithm of a (family, n, repeat) triple runs on the same graph.
std::vector<SweepJob> sweep_jobs(const SweepSpec& spec);

struct SweepRow {
  SweepJob job;
  RunMetrics metrics;
  std::uint64_t diameter = 0;
};

// Mean and 95% confidence interval (mean +/- 1.96 * sample sd / sqrt(runs))
// of t_total and x for each (family, n, algorithm), in spec order.
std::string aggregate_csv(const std::vector<SweepRow>& rows);

// Runs the sweep and writes both CSV files. Returns kExitOk when every run is
// correct, kExitFailure otherwise. Output files are written through a
// temporary name and removed if anything throws.
int run_sweep(const SweepSpec& spec, std::ostream& log);

struct CorpusEntry {
  std::string label;
  GraphFamily family;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

// Special graphs (single node, paths, rings, stars, complete graphs) followed
// by seeded random graphs of every random family, all with n <= 200. Entries
// with n above n_cap are dropped.
std::vector<CorpusEntry> verification_corpus(std::size_t n_cap = 200);

// Multiplies every count payload by two. Used to show the oracle can fail.
void double_count_payloads(Message& m);

}  // namespace anb::cli
