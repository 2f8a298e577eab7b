#pragma once

#include "anb/engine.hpp"
#include "anb/graph.hpp"

#include <cstdint>
#include <deque>
#include <initializer_list>
#include <vector>

namespace anb::test {

inline Graph make_graph(std::size_t n, std::initializer_list<Edge> edges) {
  std::vector<Edge> list(edges);
  return Graph::from_edges(n, list);
}

inline Graph k3() { return generate(Complete{}, 3, 0); }
inline Graph star5() { return generate(Star{}, 5, 0); }
inline Graph path3() { return generate(Path{}, 3, 0); }
inline Graph single() { return generate(Complete{}, 1, 0); }

// Plain queue-based BFS from every source, independent of the library's
// bit-parallel diameter.
inline std::vector<std::vector<int>> all_pairs_hops(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, -1));
  for (NodeId s = 0; s < n; ++s) {
    std::deque<NodeId> q{s};
    d[s][s] = 0;
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop_front();
      for (NodeId v : g.neighbors(u)) {
        if (d[s][v] < 0) {
          d[s][v] = d[s][u] + 1;
          q.push_back(v);
        }
      }
    }
  }
  return d;
}

inline int naive_diameter(const Graph& g) {
  int best = 0;
  for (const auto& row : all_pairs_hops(g))
    for (int x : row) best = std::max(best, x);
  return best;
}

inline RunResult run_algo(const Graph& g, Algorithm a, TraceLevel level = TraceLevel::Metrics) {
  SimConfig config(g);
  config.algorithm = a;
  config.trace_level = level;
  return run(config);
}

}  // namespace anb::test
