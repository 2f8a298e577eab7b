#include "support.hpp"

#include "anb/graph.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

using namespace anb;
using anb::test::make_graph;

namespace {

// Adjacency must be sorted, symmetric, loop-free and duplicate-free.
void check_well_formed(const Graph& g) {
  std::size_t degree_sum = 0;
  for (NodeId u = 0; u < g.size(); ++u) {
    const auto nb = g.neighbors(u);
    degree_sum += nb.size();
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
    for (NodeId v : nb) {
      CHECK(v != u);
      CHECK(g.adjacent(v, u));
    }
  }
  CHECK(degree_sum == 2 * g.edge_count());
}

bool connected(const Graph& g) {
  for (const auto& row : anb::test::all_pairs_hops(g))
    if (std::find(row.begin(), row.end(), -1) != row.end()) return false;
  return true;
}

}  // namespace

TEST_CASE("complete graph on three nodes is a triangle") {
  const Graph g = generate(Complete{}, 3, 0);
  CHECK(g.size() == 3);
  CHECK(g.edge_count() == 3);
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("star of five has a degree-4 center") {
  const Graph g = generate(Star{}, 5, 0);
  CHECK(g.degree(0) == 4);
  for (NodeId v = 1; v < 5; ++v) CHECK(g.degree(v) == 1);
}

TEST_CASE("ring and path shapes") {
  CHECK(generate(Ring{}, 6, 0).edge_count() == 6);
  CHECK(generate(Path{}, 6, 0).edge_count() == 5);
  CHECK(generate(Ring{}, 2, 0) == generate(Path{}, 2, 0));
  CHECK(generate(Ring{}, 1, 0).edge_count() == 0);
}

TEST_CASE("ER mean degree matches p_e(n-1) over 100 seeds") {
  double total = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Graph g = generate(ErdosRenyi{}, 200, seed);
    REQUIRE(g.size() == 200);
    total += 2.0 * static_cast<double>(g.edge_count()) / 200.0;
  }
  const double mean = total / 100.0;
  const double expected = 0.1 * 199;
  CHECK(mean == doctest::Approx(expected).epsilon(0.25));
}

TEST_CASE("BA adds m edges per node after the seed clique") {
  const std::size_t n = 300, m = 10;
  const Graph g = generate(BarabasiAlbert{}, n, 7);
  CHECK(g.edge_count() == m * (m + 1) / 2 + (n - m - 1) * m);
  for (NodeId v = 0; v < n; ++v) CHECK(g.degree(v) >= m);
  CHECK(generate(BarabasiAlbert{}, 11, 3) == generate(Complete{}, 11, 0));
}

TEST_CASE("WS keeps the lattice edge count") {
  const Graph g = generate(WattsStrogatz{}, 100, 5);
  CHECK(g.edge_count() == 100 * 10);
  const Graph lattice = generate(WattsStrogatz{20, 0.0}, 100, 5);
  for (NodeId v = 0; v < 100; ++v) CHECK(lattice.degree(v) == 20);
  CHECK(generate(WattsStrogatz{}, 2, 1) == generate(Complete{}, 2, 0));
}

TEST_CASE("random families produce connected, well-formed graphs") {
  for (const std::string name : {"ba", "er", "ws", "rgg"}) {
    for (std::size_t n : {1, 2, 5, 30, 150}) {
      for (std::uint64_t seed : {1, 2}) {
        CAPTURE(name);
        CAPTURE(n);
        const Graph g = generate(family_from_name(name), n, seed);
        CHECK(g.size() == n);
        check_well_formed(g);
        CHECK(connected(g));
      }
    }
  }
}

TEST_CASE("generation is deterministic in the seed") {
  for (const std::string name : {"ba", "er", "ws", "rgg"}) {
    CAPTURE(name);
    const GraphFamily f = family_from_name(name);
    CHECK(generate(f, 120, 9) == generate(f, 120, 9));
    CHECK_FALSE(generate(f, 120, 9) == generate(f, 120, 10));
  }
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(generate(ErdosRenyi{}, 0, 1), GraphError);
  CHECK_THROWS_AS(generate(ErdosRenyi{0.0}, 10, 1), GraphError);
  CHECK_THROWS_AS(generate(WattsStrogatz{3, 0.1}, 10, 1), GraphError);
  CHECK_THROWS_AS(generate(WattsStrogatz{10, 0.1}, 10, 1), GraphError);
  CHECK_THROWS_AS(generate(BarabasiAlbert{0}, 10, 1), GraphError);
  CHECK_THROWS_AS(generate(RandomGeometric{-1.0}, 10, 1), GraphError);
  CHECK_THROWS_AS(family_from_name("lattice"), std::invalid_argument);
}

TEST_CASE("hopelessly sparse ER exhausts its retries") {
  CHECK_THROWS_AS(generate(ErdosRenyi{1e-6}, 50, 1), GraphError);
}

TEST_CASE("from_edges validation") {
  CHECK_THROWS_WITH_AS(make_graph(2, {{0, 0}, {0, 1}}), doctest::Contains("self-loop"), GraphError);
  CHECK_THROWS_WITH_AS(make_graph(2, {{0, 1}, {1, 0}}), doctest::Contains("duplicate"), GraphError);
  CHECK_THROWS_WITH_AS(make_graph(2, {{0, 2}}), doctest::Contains("outside"), GraphError);
  CHECK_THROWS_WITH_AS(make_graph(4, {{0, 1}, {2, 3}}), doctest::Contains("disconnected"), GraphError);
  CHECK_THROWS_AS(make_graph(0, {}), GraphError);
  CHECK(make_graph(1, {}).size() == 1);
}

TEST_CASE("diameter of the named shapes") {
  CHECK(diameter(generate(Path{}, 4, 0)) == 3);
  CHECK(diameter(generate(Complete{}, 5, 0)) == 1);
  CHECK(diameter(generate(Star{}, 5, 0)) == 2);
  CHECK(diameter(generate(Complete{}, 1, 0)) == 0);
  CHECK(diameter(generate(Ring{}, 9, 0)) == 4);
}

TEST_CASE("diameter matches all-pairs BFS on random graphs") {
  for (const std::string name : {"ba", "er", "ws", "rgg"}) {
    for (std::size_t n : {3, 64, 65, 130}) {
      CAPTURE(name);
      CAPTURE(n);
      const Graph g = generate(family_from_name(name), n, n + 11);
      CHECK(static_cast<int>(diameter(g)) == anb::test::naive_diameter(g));
    }
  }
}

TEST_CASE("bfs_distances matches the reference") {
  const Graph g = generate(RandomGeometric{}, 90, 4);
  const auto ref = anb::test::all_pairs_hops(g);
  for (NodeId s : {0u, 17u, 89u}) {
    const auto d = bfs_distances(g, s);
    for (NodeId v = 0; v < g.size(); ++v) CHECK(static_cast<int>(d[v]) == ref[s][v]);
  }
}

TEST_CASE("average degree is 2|E|/n") {
  CHECK(average_degree(generate(Complete{}, 3, 0)) == 2);
  CHECK(average_degree(generate(Star{}, 5, 0)) == ExactCount(8, 5));
  CHECK(average_degree(generate(Path{}, 3, 0)) == ExactCount(4, 3));
  CHECK(average_degree(generate(Complete{}, 1, 0)) == 0);
}

TEST_CASE("edge list parsing") {
  CHECK(parse_edge_list("0 1\n1 2") == generate(Path{}, 3, 0));
  CHECK(parse_edge_list("# header\n0 1   # first\n\n2 1\n") == generate(Path{}, 3, 0));
  CHECK(parse_edge_list("").size() == 1);
  CHECK_THROWS_WITH_AS(parse_edge_list("0 0"), doctest::Contains("self-loop"), GraphError);
  CHECK_THROWS_AS(parse_edge_list("0 x"), GraphError);
  CHECK_THROWS_AS(parse_edge_list("0 1 2"), GraphError);
  CHECK_THROWS_AS(parse_edge_list("0 2"), GraphError);
}

TEST_CASE("edge list save and load round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "anb_graph_test";
  std::filesystem::create_directories(dir);
  for (const std::string name : {"ba", "er", "ws", "rgg"}) {
    const Graph g = generate(family_from_name(name), 80, 3);
    const auto file = dir / (name + ".txt");
    save_edge_list(g, file);
    CHECK(load_edge_list(file) == g);
    CHECK(parse_edge_list(format_edge_list(g)) == g);
    CHECK(generate(FromFile{file}, 80, 0) == g);
    CHECK_THROWS_AS(generate(FromFile{file}, 81, 0), GraphError);
  }
  CHECK_THROWS_AS(load_edge_list(dir / "missing.txt"), GraphError);
  std::filesystem::remove_all(dir);
}
