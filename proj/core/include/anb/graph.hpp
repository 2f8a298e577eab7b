#pragma once

#include "anb/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace anb {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;
  bool operator==(const Edge&) const = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Undirected, unweighted, connected graph on nodes {0, ..., n-1}. Adjacency
// lists are sorted, symmetric, and free of self-loops and duplicate edges.
// Immutable after construction.
class Graph {
 public:
  // Validates and builds. Throws GraphError on an out-of-range id, a self-loop,
  // a duplicate edge, n == 0, or a disconnected result (the message names an
  // unreachable node and the size of its component).
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size() / 2; }
  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }
  std::span<const NodeId> neighbors(NodeId i) const {
    return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
  }
  bool adjacent(NodeId a, NodeId b) const;

  // Every edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  Graph() = default;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

// Random and deterministic families. Parameters left empty take their default
// for the requested size: BA m=10, ER p_e=20/n, WS k=20 p_r=0.5, RGG
// radius=sqrt(10/n). See generate() for the small-n adjustments.
struct BarabasiAlbert {
  std::optional<std::size_t> m;
};
struct ErdosRenyi {
  std::optional<double> edge_probability;
};
struct WattsStrogatz {
  std::optional<std::size_t> k;
  std::optional<double> rewire_probability;
};
struct RandomGeometric {
  std::optional<double> radius;
};
struct Star {};
struct Complete {};
struct Path {};
struct Ring {};
struct FromFile {
  std::filesystem::path path;
};

using GraphFamily = std::variant<BarabasiAlbert, ErdosRenyi, WattsStrogatz, RandomGeometric,
                                 Star, Complete, Path, Ring, FromFile>;

// Short CLI name: ba, er, ws, rgg, star, complete, path, ring, file.
std::string family_name(const GraphFamily& family);
// Inverse of family_name for the generated families (no "file"). Throws
// std::invalid_argument on an unknown name.
GraphFamily family_from_name(const std::string& name);

inline constexpr int kMaxConnectivityAttempts = 1000;
inline constexpr std::uint64_t kRedrawSeedStride = 0x9E3779B9ULL;

// Draws a connected graph. Random families that come out disconnected are
// re-drawn with seed + attempt * 0x9E3779B9 for up to 1000 attempts.
//
// Small-n rules for defaults: BA with n <= m+1 is the complete graph; ER uses
// p_e = min(1, 20/n); WS uses k = min(20, largest even number < n) and is the
// complete graph when that leaves k < 2; Ring with n < 3 is the path.
//
// Throws GraphError on n == 0, out-of-range parameters, or exhausted retries.
Graph generate(const GraphFamily& family, std::size_t n, std::uint64_t seed);

// Hop distances from source; every entry is finite since graphs are connected.
std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source);

// Exact diameter via all-sources BFS, run 64 sources at a time with bitmasks.
std::uint32_t diameter(const Graph& g);

// (sum of degrees) / n.
ExactCount average_degree(const Graph& g);

// Edge-list text format: one "u v" pair per line, '#' starts a comment, each
// undirected edge listed once. n is one more than the largest id; a file with
// no edges is the single-node graph.
Graph load_edge_list(const std::filesystem::path& path);
Graph parse_edge_list(std::string_view text);
void save_edge_list(const Graph& g, const std::filesystem::path& path);
std::string format_edge_list(const Graph& g);

}  // namespace anb
