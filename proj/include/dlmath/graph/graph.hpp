#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dlmath::graph {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;
/// One byte per edge slot of the lexicographic edge enumeration, each 0 or 1.
using EdgeBits = std::vector<std::uint8_t>;

/// Lexicographic enumeration of the C(n,2) unordered pairs:
/// (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1).
struct EdgeOrder {
  static std::size_t edge_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }
  /// Index of {u, v}; the pair may be given in either order. Throws std::out_of_range.
  static std::size_t edge_index(std::size_t n, Edge pair);
  static Edge index_edge(std::size_t n, std::size_t index);
};

/// Simple undirected graph on vertices 0..n-1. Immutable after construction.
class Graph {
 public:
  /// Edgeless graph. Throws std::invalid_argument for n == 0.
  explicit Graph(std::size_t n);

  /// Edge present iff bits[edge_index] == 1. Throws on length mismatch or non-0/1 entries.
  static Graph from_bits(std::size_t n, std::span<const std::uint8_t> bits);
  /// Throws on self-loops, repeated edges or out-of-range endpoints.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  static Graph complete(std::size_t n);
  static Graph star(std::size_t n);   // center 0
  static Graph path(std::size_t n);
  static Graph cycle(std::size_t n);

  std::size_t n() const { return n_; }
  std::size_t edge_count() const { return edge_count_; }
  const EdgeBits& bits() const { return bits_; }
  bool has_edge(Vertex u, Vertex v) const;
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  std::size_t max_degree() const;
  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }
  /// Edges (u < v) in lexicographic order.
  std::vector<Edge> edges() const;

  Graph with_edge(Vertex u, Vertex v) const;
  /// Graph with vertex v renamed to relabel[v]. relabel must be a permutation of 0..n-1.
  Graph relabeled(std::span<const std::size_t> relabel) const;

  /// The edge bits as a string of '0'/'1' characters.
  std::string bitstring() const;
  static Graph from_bitstring(std::size_t n, const std::string& s);

  bool operator==(const Graph& other) const { return n_ == other.n_ && bits_ == other.bits_; }

 private:
  Graph(std::size_t n, EdgeBits bits);

  std::size_t n_;
  EdgeBits bits_;
  std::size_t edge_count_ = 0;
  std::vector<std::vector<Vertex>> adjacency_;
};

/// {"n": n, "edges": [[u, v], ...]} with u < v, lexicographically sorted.
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

bool is_connected(const Graph& g);
std::size_t component_count(const Graph& g);

}  // namespace dlmath::graph
