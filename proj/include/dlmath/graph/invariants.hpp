#pragma once

#include <cstdint>
#include <stdexcept>

#include "dlmath/graph/graph.hpp"

namespace dlmath::graph {

/// Largest eigenvalue of the 0/1 adjacency matrix by power iteration on
/// A + D I, D the max degree, so the dominant eigenvalue of the shifted
/// matrix is lambda + D even for bipartite graphs. Stops once successive
/// Rayleigh quotients differ by less than tol / 10.
double lambda_max(const Graph& g, double tol = 1e-10);

/// Every eigenvalue of the adjacency matrix (ascending) by cyclic Jacobi
/// rotations. Dense O(n^3) per sweep; used to cross-check lambda_max.
std::vector<double> adjacency_spectrum_jacobi(const Graph& g);
double lambda_max_jacobi(const Graph& g);

/// Size of a maximum matching, by Edmonds' blossom algorithm.
std::size_t matching_number(const Graph& g);

class GraphTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kBruteForceMaxVertices = 12;

/// Exhaustive backtracking over vertex-disjoint edge sets. n <= 12.
std::size_t matching_number_bruteforce(const Graph& g);

class HypothesisViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Score {
  double lambda = 0.0;
  std::size_t mu = 0;
  double value = 0.0;
};

/// lambda + mu - sqrt(n - 1) - 1; negative values are counterexamples.
/// Throws HypothesisViolation unless g is connected with n >= 3.
Score conjecture_score(const Graph& g, double tol = 1e-10);

}  // namespace dlmath::graph
