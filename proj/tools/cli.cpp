#include "cli.hpp"

#include "anb/rng.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace anb::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    throw UsageError(what + " is not an unsigned integer: '" + text + "'");
  }
  if (used != text.size() || text.starts_with('-')) throw UsageError(what + " is not an unsigned integer: '" + text + "'");
  return v;
}

std::uint64_t base_seed_from(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ANB_SEED"); env && *env) return parse_u64(env, "ANB_SEED");
  return 1;
}

std::size_t n_max_for(std::size_t n, double slack) {
  if (!(slack >= 1.0) || !std::isfinite(slack)) throw UsageError("--nmax-slack must be a finite number >= 1");
  return static_cast<std::size_t>(std::ceil(static_cast<double>(n) * slack - 1e-9));
}

std::vector<ExactCount> load_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read values file " + path.string());
  std::vector<ExactCount> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    try {
      values.push_back(parse_exact_count(line.substr(first, last - first + 1)));
    } catch (const std::invalid_argument& e) {
      throw UsageError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return values;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string summarize_counts(const std::vector<ExactCount>& counts) {
  std::set<std::string> distinct;
  for (const ExactCount& c : counts) distinct.insert(to_fraction_string(c));
  if (distinct.size() == 1) {
    const ExactCount& v = counts.front();
    return "n_i=" + (is_integral(v) ? v.get_num().get_str() : to_fraction_string(v)) + " at every node";
  }
  std::string s = "n_i differ across nodes:";
  std::size_t shown = 0;
  for (const std::string& d : distinct) {
    if (shown++ == 5) {
      s += " ...";
      break;
    }
    s += ' ' + d;
  }
  return s;
}

void print_summary(std::ostream& out, const std::string& topology, const Graph& g, std::uint64_t seed,
                   std::uint32_t diam, const RunResult& r) {
  const RunMetrics& m = r.metrics;
  out << "algorithm: " << to_string(m.algorithm) << '\n'
      << "graph: " << topology << " n=" << g.size() << " edges=" << g.edge_count() << " diameter=" << diam
      << " d_avg=" << to_decimal_string(m.avg_degree) << " seed=" << seed << '\n'
      << "result: " << (m.correct ? "correct, " : "INCORRECT, ") << summarize_counts(r.final_counts) << '\n'
      << "rounds: t_reduction=" << m.t_reduction << " t_broadcast=" << m.t_broadcast << " t_total=" << m.t_total
      << " executed=" << r.rounds_executed << " pre_iteration=" << r.pre_iteration_rounds << '\n';
  if (m.algorithm == Algorithm::AnB) {
    out << "messages:";
    for (std::size_t k = 1; k <= kMessageKindCount; ++k) out << " m" << k << '=' << m.m(k);
    out << " total=" << m.m_total << '\n'
        << "residues: r=" << m.residue_count << " x=" << to_decimal_string(m.residue_fraction) << " ("
        << to_fraction_string(m.residue_fraction) << ")\n";
  } else if (m.algorithm == Algorithm::All2All) {
    out << "messages: envelopes=" << m.baseline.envelopes << " id_broadcasts=" << m.baseline.id_broadcasts << '\n';
  } else {
    out << "messages: query=" << m.baseline.query_messages << " count=" << m.baseline.count_messages
        << " total=" << m.m_total << " min_per_node_query=" << m.baseline.min_messages_per_node_query << '\n';
  }
  out << "memory: max_measured_bits=" << m.memory_max_bits() << " formula_bits=" << m.memory_formula_bits << '\n';
}

// Invariants of the baselines that a single run can check.
std::vector<std::string> baseline_failures(const RunResult& r, const Graph& g, std::uint32_t diam) {
  std::vector<std::string> failures;
  const RunMetrics& m = r.metrics;
  const std::uint64_t n = g.size();
  if (!m.correct) failures.push_back("estimate differs from N");
  if (m.algorithm == Algorithm::All2All) {
    if (m.t_total != static_cast<Round>(diam)) {
      failures.push_back("converged at round " + std::to_string(m.t_total) + ", diameter " + std::to_string(diam));
    }
    if (m.baseline.id_broadcasts != n * n) {
      failures.push_back(std::to_string(m.baseline.id_broadcasts) + " id broadcasts, expected N^2 = " +
                         std::to_string(n * n));
    }
  } else if (m.algorithm == Algorithm::SingleTree) {
    if (m.baseline.max_query_completion > 2 * static_cast<Round>(diam)) {
      failures.push_back("a query completed at round " + std::to_string(m.baseline.max_query_completion) +
                         " > 2D = " + std::to_string(2 * diam));
    }
    if (!m.baseline.spanning_trees_valid) failures.push_back("a query tree does not span the graph");
  }
  return failures;
}

struct RunOptions {
  std::optional<std::string> family;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> graph_file;
  std::string algo = "anb";
  std::string mode = "count";
  std::optional<std::string> values;
  bool verify = false;
  std::optional<std::string> trace;
  std::optional<std::string> csv;
  double nmax_slack = 1.0;
  bool no_early_stop = false;
};

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  const auto algorithm = algorithm_from_name(o.algo);
  if (!algorithm) throw UsageError("unknown --algo " + o.algo);
  if (o.graph_file && (o.family || o.n)) throw UsageError("--graph-file excludes --family and --n");
  if (!o.graph_file && !o.family) throw UsageError("give --family and --n, or --graph-file");
  if (o.family && !o.n) throw UsageError("--family needs --n");
  if (o.n && *o.n == 0) throw UsageError("--n must be at least 1");
  if (o.mode != "count" && o.mode != "sum") throw UsageError("--mode must be count or sum");
  if (o.mode == "sum" && !o.values) throw UsageError("--mode sum needs --values");
  if (o.values && o.mode != "sum") throw UsageError("--values needs --mode sum");
  if (o.mode == "sum" && *algorithm != Algorithm::AnB) throw UsageError("--mode sum needs --algo anb");
  if (o.trace && *algorithm != Algorithm::AnB) throw UsageError("--trace needs --algo anb");

  const std::uint64_t seed = base_seed_from(o.seed);
  Graph graph = [&] {
    if (o.graph_file) return load_edge_list(*o.graph_file);
    GraphFamily family;
    try {
      family = family_from_name(*o.family);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return generate(family, *o.n, seed);
  }();
  const std::string topology = o.graph_file ? "file" : *o.family;

  SimConfig config{graph};
  config.algorithm = *algorithm;
  config.n_max = n_max_for(graph.size(), o.nmax_slack);
  config.early_stop = !o.no_early_stop;
  if (o.values) {
    config.values = load_values(*o.values);
    if (config.values->size() != graph.size()) {
      throw UsageError("--values has " + std::to_string(config.values->size()) + " entries for " +
                       std::to_string(graph.size()) + " nodes");
    }
  }
  const bool want_oracle = *algorithm == Algorithm::AnB && (o.verify || o.trace);
  config.trace_level = want_oracle ? TraceLevel::Full : TraceLevel::Metrics;

  const RunResult result = run(config);
  const std::uint32_t diam = diameter(graph);
  print_summary(out, topology, graph, seed, diam, result);

  bool checks_ok = true;
  if (want_oracle) {
    const OracleReport report = evaluate(*result.trace, graph);
    if (o.verify) {
      write_report_text(out, report);
      checks_ok = report.all_passed();
    }
    if (o.trace) {
      std::ostringstream dump;
      write_trace(dump, *result.trace, graph);
      write_report_kv(dump, report);
      write_file_atomically(*o.trace, dump.str());
    }
  } else if (o.verify) {
    const auto failures = baseline_failures(result, graph, diam);
    for (const std::string& f : failures) out << "check failed: " << f << '\n';
    if (failures.empty()) out << "baseline checks passed\n";
    checks_ok = failures.empty();
  }

  if (o.csv) {
    CsvContext ctx{topology, seed, diam};
    write_file_atomically(*o.csv, csv_header() + '\n' + csv_row(result.metrics, graph.size(), ctx) + '\n');
  }
  if (!result.metrics.correct) err << "error: final counts are not exact\n";
  if (!checks_ok) err << "error: verification failed\n";
  return result.metrics.correct && checks_ok ? kExitOk : kExitFailure;
}

struct VerifyOptions {
  std::size_t n_cap = 200;
  bool fault_injection = false;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  const auto corpus = verification_corpus(o.n_cap);
  std::size_t checked = 0;
  for (const CorpusEntry& entry : corpus) {
    const Graph graph = generate(entry.family, entry.n, entry.seed);
    SimConfig config{graph};
    if (o.fault_injection) config.fault_injector = double_count_payloads;
    try {
      run_with_oracle(config);
    } catch (const OracleViolation& v) {
      const OracleCheck* f = v.report().first_failure();
      err << "FAIL " << entry.label << ": " << f->name << ": " << f->detail << '\n';
      out << checked << " of " << corpus.size() << " graphs passed before the failure\n";
      return kExitFailure;
    } catch (const std::exception& e) {
      err << "FAIL " << entry.label << ": " << e.what() << '\n';
      return kExitFailure;
    }
    ++checked;
  }
  out << "verified " << checked << " graphs, all oracle checks passed\n";
  return kExitOk;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, const std::string& family, std::uint64_t n, std::uint64_t repeat) {
  std::uint64_t h = mix64(fnv1a(family));
  h = mix64(h ^ n);
  h = mix64(h ^ repeat);
  return base_seed ^ h;
}

void validate(const SweepSpec& spec) {
  if (spec.families.empty()) throw std::invalid_argument("no family given");
  for (const std::string& f : spec.families) family_from_name(f);
  if (spec.sizes.empty()) throw std::invalid_argument("no size given");
  if (!std::is_sorted(spec.sizes.begin(), spec.sizes.end()) ||
      std::adjacent_find(spec.sizes.begin(), spec.sizes.end()) != spec.sizes.end()) {
    throw std::invalid_argument("sizes must be strictly ascending");
  }
  if (spec.sizes.front() == 0) throw std::invalid_argument("sizes must be at least 1");
  if (spec.repeats == 0) throw std::invalid_argument("repeats must be at least 1");
  if (spec.algorithms.empty()) throw std::invalid_argument("no algorithm given");
  if (spec.output.empty()) throw std::invalid_argument("no output path");
  if (!(spec.nmax_slack >= 1.0) || !std::isfinite(spec.nmax_slack)) {
    throw std::invalid_argument("nmax slack must be a finite number >= 1");
  }
}

std::filesystem::path aggregate_path(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p.replace_filename(output.stem().string() + "_aggregate.csv");
  return p;
}

std::vector<SweepJob> sweep_jobs(const SweepSpec& spec) {
  std::vector<SweepJob> jobs;
  for (const std::string& family : spec.families)
    for (std::size_t n : spec.sizes)
      for (std::size_t rep = 0; rep < spec.repeats; ++rep)
        for (Algorithm a : spec.algorithms)
          jobs.push_back({family, n, rep, a, derive_seed(spec.base_seed, family, n, rep)});
  return jobs;
}

std::string aggregate_csv(const std::vector<SweepRow>& rows) {
  struct Acc {
    std::vector<Round> t;
    std::vector<ExactCount> x;
  };
  std::vector<std::tuple<std::string, std::size_t, Algorithm>> order;
  std::map<std::tuple<std::string, std::size_t, Algorithm>, Acc> groups;
  for (const SweepRow& row : rows) {
    const auto key = std::make_tuple(row.job.family, row.job.n, row.job.algorithm);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.t.push_back(row.metrics.t_total);
    it->second.x.push_back(row.metrics.residue_fraction);
  }
  const auto stats = [](const std::vector<ExactCount>& values) {
    ExactCount sum = 0;
    for (const ExactCount& v : values) sum += v;
    const ExactCount k(static_cast<unsigned long>(values.size()));
    const ExactCount mean = sum / k;
    double half = 0;
    if (values.size() > 1) {
      ExactCount ss = 0;
      for (const ExactCount& v : values) ss += (v - mean) * (v - mean);
      const double variance = ExactCount(ss / (k - 1)).get_d();
      half = 1.96 * std::sqrt(variance / static_cast<double>(values.size()));
    }
    const double m = mean.get_d();
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g", m, m - half, m + half);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "topology,n,algorithm,runs,t_total_mean,t_total_ci_low,t_total_ci_high,x_mean,x_ci_low,x_ci_high\n";
  for (const auto& key : order) {
    const Acc& acc = groups.at(key);
    std::vector<ExactCount> t;
    for (Round v : acc.t) t.emplace_back(static_cast<long>(v));
    os << std::get<0>(key) << ',' << std::get<1>(key) << ',' << to_string(std::get<2>(key)) << ',' << acc.t.size()
       << ',' << stats(t) << ',' << stats(acc.x) << '\n';
  }
  return os.str();
}

int run_sweep(const SweepSpec& spec, std::ostream& log) {
  validate(spec);
  const std::vector<SweepJob> jobs = sweep_jobs(spec);
  const std::size_t per_graph = spec.algorithms.size();
  const std::size_t graphs = jobs.size() / per_graph;
  std::vector<SweepRow> rows(jobs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t gi = next.fetch_add(1);
      if (gi >= graphs) return;
      try {
        const SweepJob& first = jobs[gi * per_graph];
        const Graph graph = generate(family_from_name(first.family), first.n, first.seed);
        const std::uint32_t diam = diameter(graph);
        for (std::size_t a = 0; a < per_graph; ++a) {
          const SweepJob& job = jobs[gi * per_graph + a];
          SimConfig config{graph};
          config.algorithm = job.algorithm;
          config.n_max = n_max_for(graph.size(), spec.nmax_slack);
          config.early_stop = spec.early_stop;
          config.trace_level = TraceLevel::None;
          rows[gi * per_graph + a] = SweepRow{job, run(config).metrics, diam};
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(graphs);
        return;
      }
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, graphs));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::ostringstream csv;
  csv << csv_header() << '\n';
  std::size_t incorrect = 0;
  for (const SweepRow& row : rows) {
    csv << csv_row(row.metrics, row.job.n, CsvContext{row.job.family, row.job.seed, row.diameter}) << '\n';
    if (!row.metrics.correct) ++incorrect;
  }
  const auto agg = aggregate_path(spec.output);
  try {
    write_file_atomically(spec.output, csv.str());
    write_file_atomically(agg, aggregate_csv(rows));
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(spec.output, ec);
    std::filesystem::remove(agg, ec);
    throw;
  }
  log << "wrote " << rows.size() << " runs to " << spec.output.string() << " and the aggregate to " << agg.string()
      << '\n';
  if (incorrect > 0) {
    log << incorrect << " runs ended with an incorrect count\n";
    return kExitFailure;
  }
  return kExitOk;
}

std::vector<CorpusEntry> verification_corpus(std::size_t n_cap) {
  std::vector<CorpusEntry> corpus;
  const auto add = [&](const std::string& name, GraphFamily family, std::size_t n, std::uint64_t seed) {
    if (n > n_cap) return;
    corpus.push_back({name + " n=" + std::to_string(n) + " seed=" + std::to_string(seed), std::move(family), n, seed});
  };
  add("single", Complete{}, 1, 0);
  for (std::size_t n : {2, 3, 4, 7, 20, 100, 200}) add("path", Path{}, n, 0);
  for (std::size_t n : {3, 4, 5, 9, 50, 200}) add("ring", Ring{}, n, 0);
  for (std::size_t n : {2, 3, 5, 17, 100, 200}) add("star", Star{}, n, 0);
  for (std::size_t n : {2, 3, 5, 12, 40}) add("complete", Complete{}, n, 0);
  for (const char* name : {"ba", "er", "ws", "rgg"}) {
    for (std::size_t n : {5, 12, 30, 60, 100, 150, 200}) {
      for (std::uint64_t seed : {1, 2, 3}) add(name, family_from_name(name), n, seed);
    }
  }
  return corpus;
}

void double_count_payloads(Message& m) {
  if (m.kind == MessageKind::Count) m = Message::count(m.sender, 2 * m.value());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aggregate-and-broadcast network counting simulator", "anb"};
  app.require_subcommand(1);

  RunOptions ro;
  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one network");
  run_cmd->add_option("--family", ro.family, "ba|er|ws|rgg|star|complete|path|ring");
  run_cmd->add_option("--n", ro.n, "Number of nodes");
  run_cmd->add_option("--seed", ro.seed, "Graph seed (default: $ANB_SEED, then 1)");
  run_cmd->add_option("--graph-file", ro.graph_file, "Edge list, one 'u v' pair per line");
  run_cmd->add_option("--algo", ro.algo, "anb|all2all|st")->capture_default_str();
  run_cmd->add_option("--mode", ro.mode, "count|sum")->capture_default_str();
  run_cmd->add_option("--values", ro.values, "Sum mode: one rational per line, node order");
  run_cmd->add_flag("--verify", ro.verify, "Check the run against the oracle (anb) or the baseline figures");
  run_cmd->add_option("--trace", ro.trace, "Write the per-round trace and oracle report (anb only)");
  run_cmd->add_option("--csv", ro.csv, "Write the metrics row as CSV");
  run_cmd->add_option("--nmax-slack", ro.nmax_slack, "n_max = ceil(n * slack)")->capture_default_str();
  run_cmd->add_flag("--no-early-stop", ro.no_early_stop, "Always run all 4*n_max+1 rounds");

  SweepSpec spec;
  std::vector<std::string> sweep_algos;
  std::optional<std::uint64_t> sweep_seed;
  std::string sweep_output;
  bool paper_scale = false;
  bool sweep_no_early_stop = false;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run many seeded networks and write CSV files");
  sweep_cmd->add_option("--family", spec.families, "Families to sweep (repeatable)")->capture_default_str();
  sweep_cmd->add_option("--sizes", spec.sizes, "Comma-separated ascending sizes")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--repeats", spec.repeats, "Runs per (family, n)")->capture_default_str();
  sweep_cmd->add_flag("--paper-scale", paper_scale, "1000 repeats per (family, n)");
  sweep_cmd->add_option("--algo", sweep_algos, "Algorithms (repeatable, default anb)");
  sweep_cmd->add_option("--seed", sweep_seed, "Base seed (default: $ANB_SEED, then 1)");
  sweep_cmd->add_option("--csv", sweep_output, "Per-run CSV path")->required();
  sweep_cmd->add_option("--nmax-slack", spec.nmax_slack, "n_max = ceil(n * slack)")->capture_default_str();
  sweep_cmd->add_flag("--no-early-stop", sweep_no_early_stop, "Always run all 4*n_max+1 rounds");
  sweep_cmd->add_option("--threads", spec.threads, "Worker threads (0: all cores)")->capture_default_str();

  VerifyOptions vo;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the oracle over the verification corpus");
  verify_cmd->add_option("--n-cap", vo.n_cap, "Skip corpus graphs larger than this")->capture_default_str();
  verify_cmd->add_flag("--fault-injection", vo.fault_injection, "Double every count payload");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'anb --help' for the flag list\n";
    return kExitUsage;
  }
  try {
    if (*run_cmd) return cmd_run(ro, out, err);
    if (*sweep_cmd) {
      spec.base_seed = base_seed_from(sweep_seed);
      spec.output = sweep_output;
      spec.early_stop = !sweep_no_early_stop;
      if (paper_scale) spec.repeats = 1000;
      if (!sweep_algos.empty()) {
        spec.algorithms.clear();
        for (const std::string& a : sweep_algos) {
          const auto alg = algorithm_from_name(a);
          if (!alg) throw UsageError("unknown --algo " + a);
          spec.algorithms.push_back(*alg);
        }
      }
      try {
        validate(spec);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      return run_sweep(spec, out);
    }
    if (*verify_cmd) return cmd_verify(vo, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace anb::cli
