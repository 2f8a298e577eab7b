#include "anb/graph.hpp"

#include "anb/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

namespace anb {

namespace {

// Nodes reachable from 0 in CSR form, as a membership mask.
std::vector<bool> reachable_from_zero(const std::vector<std::size_t>& offsets,
                                      const std::vector<NodeId>& targets) {
  const std::size_t n = offsets.size() - 1;
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (std::size_t k = offsets[u]; k < offsets[u + 1]; ++k) {
      const NodeId v = targets[k];
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

std::string describe_component(const std::vector<std::size_t>& offsets,
                               const std::vector<NodeId>& targets, NodeId start) {
  const std::size_t n = offsets.size() - 1;
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack{start}, members;
  seen[start] = true;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    members.push_back(u);
    for (std::size_t k = offsets[u]; k < offsets[u + 1]; ++k) {
      if (!seen[targets[k]]) {
        seen[targets[k]] = true;
        stack.push_back(targets[k]);
      }
    }
  }
  std::sort(members.begin(), members.end());
  std::ostringstream os;
  os << "graph is disconnected: node " << start << " is not reachable from node 0; its component has "
     << members.size() << " node(s) {";
  for (std::size_t i = 0; i < members.size() && i < 10; ++i) os << (i ? "," : "") << members[i];
  if (members.size() > 10) os << ",...";
  os << "}";
  return os.str();
}

struct Csr {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> targets;
};

Csr build_csr(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw GraphError("graph must have at least one node");
  if (n > std::numeric_limits<NodeId>::max()) throw GraphError("too many nodes");
  Csr csr;
  csr.offsets.assign(n + 1, 0);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw GraphError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") references a node outside [0, " + std::to_string(n) + ")");
    }
    if (e.u == e.v) throw GraphError("self-loop on node " + std::to_string(e.u));
    ++csr.offsets[e.u + 1];
    ++csr.offsets[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) csr.offsets[i + 1] += csr.offsets[i];
  csr.targets.resize(csr.offsets[n]);
  std::vector<std::size_t> fill(csr.offsets.begin(), csr.offsets.end() - 1);
  for (const Edge& e : edges) {
    csr.targets[fill[e.u]++] = e.v;
    csr.targets[fill[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto first = csr.targets.begin() + static_cast<std::ptrdiff_t>(csr.offsets[i]);
    auto last = csr.targets.begin() + static_cast<std::ptrdiff_t>(csr.offsets[i + 1]);
    std::sort(first, last);
    if (auto dup = std::adjacent_find(first, last); dup != last) {
      throw GraphError("duplicate edge (" + std::to_string(std::min<NodeId>(i, *dup)) + ", " +
                       std::to_string(std::max<NodeId>(i, *dup)) + ")");
    }
  }
  return csr;
}

bool connected(const Csr& csr) {
  const auto seen = reachable_from_zero(csr.offsets, csr.targets);
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

// --- generators: each returns an edge list, connectivity is checked by the caller.

std::vector<Edge> complete_edges(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  return edges;
}

std::vector<Edge> path_edges(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  return edges;
}

std::vector<Edge> barabasi_albert_edges(std::size_t n, std::size_t m, Rng& rng) {
  if (n <= m + 1) return complete_edges(n);
  std::vector<Edge> edges = complete_edges(m + 1);
  // Each endpoint appears once per incident edge, so a uniform pick from this
  // list is a degree-proportional pick.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * m * n);
  for (const Edge& e : edges) {
    endpoints.push_back(e.u);
    endpoints.push_back(e.v);
  }
  std::vector<NodeId> chosen;
  for (NodeId v = static_cast<NodeId>(m + 1); v < n; ++v) {
    chosen.clear();
    while (chosen.size() < m) {
      const NodeId t = endpoints[rng.below(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (NodeId t : chosen) {
      edges.push_back({t, v});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return edges;
}

// G(n, p) by geometric skipping over the lower triangle (Batagelj & Brandes).
std::vector<Edge> erdos_renyi_edges(std::size_t n, double p, Rng& rng) {
  if (p >= 1.0) return complete_edges(n);
  std::vector<Edge> edges;
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    const double r = rng.uniform01();
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.push_back({static_cast<NodeId>(w), static_cast<NodeId>(v)});
  }
  return edges;
}

std::vector<Edge> watts_strogatz_edges(std::size_t n, std::size_t k, double p_r, Rng& rng) {
  std::vector<std::set<NodeId>> adj(n);
  for (NodeId i = 0; i < n; ++i) {
    for (std::size_t j = 1; j <= k / 2; ++j) {
      const auto t = static_cast<NodeId>((i + j) % n);
      adj[i].insert(t);
      adj[t].insert(i);
    }
  }
  // Rewire the clockwise edge (i, i+j) lattice distance by lattice distance.
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (NodeId i = 0; i < n; ++i) {
      if (!rng.bernoulli(p_r)) continue;
      const auto old = static_cast<NodeId>((i + j) % n);
      if (!adj[i].contains(old)) continue;  // already rewired away from the other side
      if (adj[i].size() >= n - 1) continue;
      NodeId w;
      do {
        w = static_cast<NodeId>(rng.below(n));
      } while (w == i || adj[i].contains(w));
      adj[i].erase(old);
      adj[old].erase(i);
      adj[i].insert(w);
      adj[w].insert(i);
    }
  }
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : adj[u])
      if (u < v) edges.push_back({u, v});
  return edges;
}

std::vector<Edge> random_geometric_edges(std::size_t n, double radius, Rng& rng) {
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.uniform01();
    y[i] = rng.uniform01();
  }
  const auto cells = static_cast<std::size_t>(
      std::clamp(std::floor(1.0 / radius), 1.0, std::max(1.0, std::sqrt(static_cast<double>(n)) * 4)));
  const auto cell_of = [&](double c) {
    return std::min(cells - 1, static_cast<std::size_t>(c * static_cast<double>(cells)));
  };
  std::vector<std::vector<NodeId>> grid(cells * cells);
  for (NodeId i = 0; i < n; ++i) grid[cell_of(y[i]) * cells + cell_of(x[i])].push_back(i);

  const double r2 = radius * radius;
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    const std::size_t cx = cell_of(x[i]);
    const std::size_t cy = cell_of(y[i]);
    for (std::size_t gy = cy == 0 ? 0 : cy - 1; gy <= std::min(cells - 1, cy + 1); ++gy) {
      for (std::size_t gx = cx == 0 ? 0 : cx - 1; gx <= std::min(cells - 1, cx + 1); ++gx) {
        for (NodeId j : grid[gy * cells + gx]) {
          if (j <= i) continue;
          const double dx = x[i] - x[j];
          const double dy = y[i] - y[j];
          if (dx * dx + dy * dy <= r2) edges.push_back({i, j});
        }
      }
    }
  }
  return edges;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  Csr csr = build_csr(n, edges);
  const auto seen = reachable_from_zero(csr.offsets, csr.targets);
  for (NodeId i = 0; i < n; ++i) {
    if (!seen[i]) throw GraphError(describe_component(csr.offsets, csr.targets, i));
  }
  Graph g;
  g.offsets_ = std::move(csr.offsets);
  g.targets_ = std::move(csr.targets);
  return g;
}

bool Graph::adjacent(NodeId a, NodeId b) const {
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < size(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.push_back({u, v});
  return out;
}

std::string family_name(const GraphFamily& family) {
  return std::visit(overloaded{
                        [](const BarabasiAlbert&) { return std::string("ba"); },
                        [](const ErdosRenyi&) { return std::string("er"); },
                        [](const WattsStrogatz&) { return std::string("ws"); },
                        [](const RandomGeometric&) { return std::string("rgg"); },
                        [](const Star&) { return std::string("star"); },
                        [](const Complete&) { return std::string("complete"); },
                        [](const Path&) { return std::string("path"); },
                        [](const Ring&) { return std::string("ring"); },
                        [](const FromFile&) { return std::string("file"); },
                    },
                    family);
}

GraphFamily family_from_name(const std::string& name) {
  if (name == "ba") return BarabasiAlbert{};
  if (name == "er") return ErdosRenyi{};
  if (name == "ws") return WattsStrogatz{};
  if (name == "rgg") return RandomGeometric{};
  if (name == "star") return Star{};
  if (name == "complete") return Complete{};
  if (name == "path") return Path{};
  if (name == "ring") return Ring{};
  throw std::invalid_argument("unknown graph family '" + name + "'");
}

Graph generate(const GraphFamily& family, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw GraphError("n must be at least 1");
  if (const auto* file = std::get_if<FromFile>(&family)) {
    Graph g = load_edge_list(file->path);
    if (g.size() != n) {
      throw GraphError("graph file has " + std::to_string(g.size()) + " nodes, expected " +
                       std::to_string(n));
    }
    return g;
  }

  // Parameter validation happens once, before any draw.
  const auto draw = std::visit(
      overloaded{
          [&](const BarabasiAlbert& p) -> std::function<std::vector<Edge>(Rng&)> {
            const std::size_t m = p.m.value_or(10);
            if (m < 1) throw GraphError("BA requires m >= 1");
            return [=](Rng& rng) { return barabasi_albert_edges(n, m, rng); };
          },
          [&](const ErdosRenyi& p) -> std::function<std::vector<Edge>(Rng&)> {
            const double pe = p.edge_probability.value_or(std::min(1.0, 20.0 / static_cast<double>(n)));
            if (!(pe > 0.0 && pe <= 1.0)) throw GraphError("ER requires 0 < p_e <= 1");
            return [=](Rng& rng) { return erdos_renyi_edges(n, pe, rng); };
          },
          [&](const WattsStrogatz& p) -> std::function<std::vector<Edge>(Rng&)> {
            const double pr = p.rewire_probability.value_or(0.5);
            if (!(pr >= 0.0 && pr <= 1.0)) throw GraphError("WS requires 0 <= p_r <= 1");
            std::size_t k;
            if (p.k) {
              k = *p.k;
              if (k < 2 || k % 2 != 0 || k >= n) throw GraphError("WS requires even k with 2 <= k < n");
            } else {
              k = std::min<std::size_t>(20, n >= 1 ? ((n - 1) / 2) * 2 : 0);
              if (k < 2) return [=](Rng&) { return complete_edges(n); };
            }
            return [=](Rng& rng) { return watts_strogatz_edges(n, k, pr, rng); };
          },
          [&](const RandomGeometric& p) -> std::function<std::vector<Edge>(Rng&)> {
            const double r = p.radius.value_or(std::sqrt(10.0 / static_cast<double>(n)));
            if (!(r > 0.0)) throw GraphError("RGG requires radius > 0");
            return [=](Rng& rng) { return random_geometric_edges(n, r, rng); };
          },
          [&](const Star&) -> std::function<std::vector<Edge>(Rng&)> {
            return [=](Rng&) {
              std::vector<Edge> e;
              for (NodeId v = 1; v < n; ++v) e.push_back({0, v});
              return e;
            };
          },
          [&](const Complete&) -> std::function<std::vector<Edge>(Rng&)> {
            return [=](Rng&) { return complete_edges(n); };
          },
          [&](const Path&) -> std::function<std::vector<Edge>(Rng&)> {
            return [=](Rng&) { return path_edges(n); };
          },
          [&](const Ring&) -> std::function<std::vector<Edge>(Rng&)> {
            return [=](Rng&) {
              auto e = path_edges(n);
              if (n >= 3) e.push_back({0, static_cast<NodeId>(n - 1)});
              return e;
            };
          },
          [&](const FromFile&) -> std::function<std::vector<Edge>(Rng&)> { return {}; },
      },
      family);

  for (int attempt = 0; attempt < kMaxConnectivityAttempts; ++attempt) {
    Rng rng(seed + static_cast<std::uint64_t>(attempt) * kRedrawSeedStride);
    const std::vector<Edge> edges = draw(rng);
    Csr csr = build_csr(n, edges);
    if (connected(csr)) return Graph::from_edges(n, edges);
  }
  throw GraphError(family_name(family) + " graph with n=" + std::to_string(n) +
                   " still disconnected after " + std::to_string(kMaxConnectivityAttempts) +
                   " attempts");
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source) {
  constexpr auto kUnreached = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(g.size(), kUnreached);
  std::vector<NodeId> frontier{source}, next;
  dist[source] = 0;
  for (std::uint32_t level = 1; !frontier.empty(); ++level) {
    next.clear();
    for (NodeId u : frontier) {
      for (NodeId v : g.neighbors(u)) {
        if (dist[v] == kUnreached) {
          dist[v] = level;
          next.push_back(v);
        }
      }
    }
    frontier.swap(next);
  }
  return dist;
}

std::uint32_t diameter(const Graph& g) {
  const std::size_t n = g.size();
  std::uint32_t best = 0;
  std::vector<std::uint64_t> seen(n), frontier(n), next(n);
  for (std::size_t base = 0; base < n; base += 64) {
    const std::size_t width = std::min<std::size_t>(64, n - base);
    const std::uint64_t full = width == 64 ? ~0ULL : ((1ULL << width) - 1);
    std::fill(seen.begin(), seen.end(), 0);
    std::fill(frontier.begin(), frontier.end(), 0);
    for (std::size_t b = 0; b < width; ++b) {
      seen[base + b] = frontier[base + b] = 1ULL << b;
    }
    // Count of (node, source) pairs still unreached; each level that reaches
    // something extends the eccentricity of at least one source.
    std::size_t missing = n * width - width;
    std::uint32_t level = 0;
    while (missing > 0) {
      ++level;
      bool any = false;
      for (std::size_t v = 0; v < n; ++v) {
        std::uint64_t acc = 0;
        for (NodeId u : g.neighbors(static_cast<NodeId>(v))) acc |= frontier[u];
        acc &= ~seen[v] & full;
        next[v] = acc;
        if (acc) {
          seen[v] |= acc;
          missing -= static_cast<std::size_t>(std::popcount(acc));
          any = true;
        }
      }
      frontier.swap(next);
      if (!any) break;
    }
    best = std::max(best, level);
  }
  return best;
}

ExactCount average_degree(const Graph& g) {
  ExactCount out(mpz_class(static_cast<unsigned long>(2 * g.edge_count())),
                 mpz_class(static_cast<unsigned long>(g.size())));
  out.canonicalize();
  return out;
}

Graph parse_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  std::size_t max_id = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream is(line);
    std::string a, b, extra;
    if (!(is >> a)) {
      if (end == text.size()) break;
      continue;
    }
    const auto fail = [&](const std::string& why) {
      throw GraphError("line " + std::to_string(line_no) + ": " + why);
    };
    if (!(is >> b)) fail("expected two node ids, got one");
    if (is >> extra) fail("unexpected trailing token '" + extra + "'");
    const auto parse_id = [&](const std::string& tok) -> NodeId {
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        fail("invalid node id '" + tok + "'");
      }
      const unsigned long long value = std::stoull(tok);
      if (value >= std::numeric_limits<NodeId>::max()) fail("node id out of range '" + tok + "'");
      return static_cast<NodeId>(value);
    };
    const NodeId u = parse_id(a);
    const NodeId v = parse_id(b);
    if (u == v) fail("self-loop on node " + std::to_string(u));
    max_id = std::max<std::size_t>(max_id, std::max(u, v));
    edges.push_back({u, v});
    if (end == text.size()) break;
  }
  const std::size_t n = edges.empty() ? 1 : max_id + 1;
  return Graph::from_edges(n, edges);
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open graph file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_edge_list(ss.str());
}

std::string format_edge_list(const Graph& g) {
  std::ostringstream os;
  os << "# nodes " << g.size() << " edges " << g.edge_count() << "\n";
  for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << '\n';
  return os.str();
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw GraphError("cannot write graph file '" + path.string() + "'");
  out << format_edge_list(g);
}

}  // namespace anb
