#pragma once

#include <numeric>
#include <vector>

#include "dlmath/graph/graph.hpp"

namespace oracle {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

inline std::size_t uf_components(const dlmath::graph::Graph& g) {
  UnionFind uf(g.n());
  std::size_t comps = g.n();
  for (const auto& [u, v] : g.edges())
    if (uf.unite(u, v)) --comps;
  return comps;
}

}  // namespace oracle
