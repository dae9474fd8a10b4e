#include <algorithm>
#include <deque>
#include <limits>

#include "dlmath/graph/invariants.hpp"

namespace dlmath::graph {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Edmonds' algorithm: grow an alternating forest from one free root at a
// time, contracting odd cycles (blossoms) into their base vertex.
class BlossomMatcher {
 public:
  explicit BlossomMatcher(const Graph& g)
      : g_(g), n_(g.n()), match_(n_, kNone), parent_(n_), base_(n_), in_queue_(n_), in_blossom_(n_) {}

  std::size_t run() {
    // Greedy warm start; the augmenting search fixes any suboptimal choices.
    for (Vertex u = 0; u < n_; ++u) {
      if (match_[u] != kNone) continue;
      for (Vertex v : g_.neighbors(u)) {
        if (match_[v] == kNone) {
          match_[u] = v;
          match_[v] = u;
          break;
        }
      }
    }
    for (Vertex root = 0; root < n_; ++root) {
      if (match_[root] != kNone) continue;
      const Vertex end = find_augmenting_path(root);
      if (end != kNone) augment(end);
    }
    std::size_t size = 0;
    for (Vertex v = 0; v < n_; ++v)
      if (match_[v] != kNone) ++size;
    return size / 2;
  }

 private:
  Vertex lowest_common_ancestor(Vertex a, Vertex b) {
    std::vector<char> on_path(n_, 0);
    for (;;) {
      a = base_[a];
      on_path[a] = 1;
      if (match_[a] == kNone) break;
      a = parent_[match_[a]];
    }
    for (;;) {
      b = base_[b];
      if (on_path[b]) return b;
      b = parent_[match_[b]];
    }
  }

  void mark_path(Vertex v, Vertex blossom_base, Vertex child) {
    while (base_[v] != blossom_base) {
      in_blossom_[base_[v]] = 1;
      in_blossom_[base_[match_[v]]] = 1;
      parent_[v] = child;
      child = match_[v];
      v = parent_[match_[v]];
    }
  }

  Vertex find_augmenting_path(Vertex root) {
    std::fill(parent_.begin(), parent_.end(), kNone);
    std::fill(in_queue_.begin(), in_queue_.end(), 0);
    for (Vertex v = 0; v < n_; ++v) base_[v] = v;

    std::deque<Vertex> queue{root};
    in_queue_[root] = 1;
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      for (Vertex u : g_.neighbors(v)) {
        if (base_[v] == base_[u] || match_[v] == u) continue;
        const bool u_is_outer = u == root || (match_[u] != kNone && parent_[match_[u]] != kNone);
        if (u_is_outer) {
          const Vertex b = lowest_common_ancestor(v, u);
          std::fill(in_blossom_.begin(), in_blossom_.end(), 0);
          mark_path(v, b, u);
          mark_path(u, b, v);
          for (Vertex w = 0; w < n_; ++w) {
            if (!in_blossom_[base_[w]]) continue;
            base_[w] = b;
            if (!in_queue_[w]) {
              in_queue_[w] = 1;
              queue.push_back(w);
            }
          }
        } else if (parent_[u] == kNone) {
          parent_[u] = v;
          if (match_[u] == kNone) return u;
          const Vertex next = match_[u];
          in_queue_[next] = 1;
          queue.push_back(next);
        }
      }
    }
    return kNone;
  }

  void augment(Vertex v) {
    while (v != kNone) {
      const Vertex pv = parent_[v];
      const Vertex next = match_[pv];
      match_[v] = pv;
      match_[pv] = v;
      v = next;
    }
  }

  const Graph& g_;
  std::size_t n_;
  std::vector<Vertex> match_;
  std::vector<Vertex> parent_;
  std::vector<Vertex> base_;
  std::vector<char> in_queue_;
  std::vector<char> in_blossom_;
};

std::size_t best_from(const std::vector<Edge>& edges, std::size_t next,
                      std::vector<char>& used, std::size_t current, std::size_t best) {
  const std::size_t free_vertices = static_cast<std::size_t>(std::count(used.begin(), used.end(), 0));
  if (current + free_vertices / 2 <= best) return best;  // cannot improve
  if (current > best) best = current;
  for (std::size_t i = next; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    if (used[u] || used[v]) continue;
    used[u] = used[v] = 1;
    best = best_from(edges, i + 1, used, current + 1, best);
    used[u] = used[v] = 0;
  }
  return best;
}

}  // namespace

std::size_t matching_number(const Graph& g) { return BlossomMatcher(g).run(); }

std::size_t matching_number_bruteforce(const Graph& g) {
  if (g.n() > kBruteForceMaxVertices)
    throw GraphTooLarge("matching_number_bruteforce: n=" + std::to_string(g.n()) + " exceeds " +
                        std::to_string(kBruteForceMaxVertices));
  const auto edges = g.edges();
  std::vector<char> used(g.n(), 0);
  return best_from(edges, 0, used, 0, 0);
}

}  // namespace dlmath::graph
