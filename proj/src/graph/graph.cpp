#include "dlmath/graph/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace dlmath::graph {

std::size_t EdgeOrder::edge_index(std::size_t n, Edge pair) {
  auto [u, v] = pair;
  if (u > v) std::swap(u, v);
  if (u == v || v >= n)
    throw std::out_of_range("edge (" + std::to_string(pair.first) + "," + std::to_string(pair.second) +
                            ") is not a pair of distinct vertices below " + std::to_string(n));
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

Edge EdgeOrder::index_edge(std::size_t n, std::size_t index) {
  if (index >= edge_count(n))
    throw std::out_of_range("edge index " + std::to_string(index) + " out of range for n=" + std::to_string(n));
  std::size_t u = 0;
  std::size_t row = n - 1;
  while (index >= row) {
    index -= row;
    ++u;
    --row;
  }
  return {u, u + 1 + index};
}

Graph::Graph(std::size_t n) : Graph(n, EdgeBits(EdgeOrder::edge_count(n), 0)) {}

Graph::Graph(std::size_t n, EdgeBits bits) : n_(n), bits_(std::move(bits)), adjacency_(n) {
  if (n == 0) throw std::invalid_argument("graph needs at least one vertex");
  std::size_t idx = 0;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v, ++idx) {
      if (!bits_[idx]) continue;
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
      ++edge_count_;
    }
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

Graph Graph::from_bits(std::size_t n, std::span<const std::uint8_t> bits) {
  if (n == 0) throw std::invalid_argument("graph needs at least one vertex");
  if (bits.size() != EdgeOrder::edge_count(n))
    throw std::invalid_argument("expected " + std::to_string(EdgeOrder::edge_count(n)) + " edge bits for n=" +
                                std::to_string(n) + ", got " + std::to_string(bits.size()));
  for (auto b : bits)
    if (b > 1) throw std::invalid_argument("edge bits must be 0 or 1");
  return Graph(n, EdgeBits(bits.begin(), bits.end()));
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw std::invalid_argument("graph needs at least one vertex");
  EdgeBits bits(EdgeOrder::edge_count(n), 0);
  for (const auto& e : edges) {
    if (e.first == e.second) throw std::invalid_argument("self-loops are not allowed");
    auto& slot = bits[EdgeOrder::edge_index(n, e)];
    if (slot) throw std::invalid_argument("repeated edge");
    slot = 1;
  }
  return Graph(n, std::move(bits));
}

Graph Graph::complete(std::size_t n) {
  if (n == 0) throw std::invalid_argument("graph needs at least one vertex");
  return Graph(n, EdgeBits(EdgeOrder::edge_count(n), 1));
}

Graph Graph::star(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 1; v < n; ++v) e.emplace_back(0, v);
  return from_edges(n, e);
}

Graph Graph::path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 1; v < n; ++v) e.emplace_back(v - 1, v);
  return from_edges(n, e);
}

Graph Graph::cycle(std::size_t n) {
  if (n < 3) throw std::invalid_argument("a cycle needs at least 3 vertices");
  std::vector<Edge> e;
  for (Vertex v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return from_edges(n, e);
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u == v) return false;
  return bits_[EdgeOrder::edge_index(n_, {u, v})] != 0;
}

std::size_t Graph::max_degree() const {
  std::size_t d = 0;
  for (const auto& nb : adjacency_) d = std::max(d, nb.size());
  return d;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(EdgeOrder::index_edge(n_, i));
  return out;
}

Graph Graph::with_edge(Vertex u, Vertex v) const {
  if (u == v) throw std::invalid_argument("self-loops are not allowed");
  EdgeBits bits = bits_;
  bits[EdgeOrder::edge_index(n_, {u, v})] = 1;
  return Graph(n_, std::move(bits));
}

Graph Graph::relabeled(std::span<const std::size_t> relabel) const {
  if (relabel.size() != n_) throw std::invalid_argument("relabeling has the wrong length");
  std::vector<char> hit(n_, 0);
  for (auto r : relabel) {
    if (r >= n_ || hit[r]) throw std::invalid_argument("relabeling is not a permutation");
    hit[r] = 1;
  }
  EdgeBits bits(bits_.size(), 0);
  for (const auto& [u, v] : edges()) bits[EdgeOrder::edge_index(n_, {relabel[u], relabel[v]})] = 1;
  return Graph(n_, std::move(bits));
}

std::string Graph::bitstring() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

Graph Graph::from_bitstring(std::size_t n, const std::string& s) {
  EdgeBits bits(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bitstring must contain only 0 and 1");
    bits[i] = s[i] == '1';
  }
  return from_bits(n, bits);
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.n()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<std::size_t>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edge entries must be [u, v] pairs");
    edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return Graph::from_edges(n, edges);
}

std::size_t component_count(const Graph& g) {
  std::vector<char> seen(g.n(), 0);
  std::size_t components = 0;
  std::deque<Vertex> queue;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = 1;
    queue.push_back(s);
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop_front();
      for (Vertex v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
  }
  return components;
}

bool is_connected(const Graph& g) { return component_count(g) == 1; }

}  // namespace dlmath::graph
