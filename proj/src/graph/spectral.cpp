#include <algorithm>
#include <cmath>
#include <random>

#include "dlmath/graph/invariants.hpp"

namespace dlmath::graph {

namespace {

constexpr std::size_t kMaxPowerIterations = 500000;

// y = (A + shift I) x
void shifted_product(const Graph& g, double shift, const std::vector<double>& x, std::vector<double>& y) {
  for (Vertex u = 0; u < g.n(); ++u) {
    double acc = shift * x[u];
    for (Vertex v : g.neighbors(u)) acc += x[v];
    y[u] = acc;
  }
}

double normalize(std::vector<double>& x) {
  double norm = 0.0;
  for (double v : x) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : x) v /= norm;
  return norm;
}

}  // namespace

double lambda_max(const Graph& g, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("lambda_max: tolerance must be positive");
  if (g.edge_count() == 0) return 0.0;

  const std::size_t n = g.n();
  const auto shift = static_cast<double>(g.max_degree());
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ n);
  std::uniform_real_distribution<double> noise(-1e-3, 1e-3);
  std::vector<double> x(n), y(n);
  for (double& v : x) v = 1.0 + noise(rng);
  normalize(x);

  double previous = 0.0;
  for (std::size_t it = 0; it < kMaxPowerIterations; ++it) {
    shifted_product(g, shift, x, y);
    double rayleigh = 0.0;
    for (std::size_t i = 0; i < n; ++i) rayleigh += x[i] * y[i];
    if (it > 0 && std::abs(rayleigh - previous) < tol / 10.0) {
      // A tiny quotient change also happens early on when the top two shifted
      // eigenvalues nearly coincide, so additionally require a small residual.
      double residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) residual += (y[i] - rayleigh * x[i]) * (y[i] - rayleigh * x[i]);
      if (std::sqrt(residual) < std::sqrt(tol)) return rayleigh - shift;
    }
    previous = rayleigh;
    x.swap(y);
    normalize(x);
  }
  return previous - shift;
}

std::vector<double> adjacency_spectrum_jacobi(const Graph& g) {
  const std::size_t n = g.n();
  std::vector<double> a(n * n, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (const auto& [u, v] : g.edges()) at(u, v) = at(v, u) = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-30) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double lambda_max_jacobi(const Graph& g) { return adjacency_spectrum_jacobi(g).back(); }

Score conjecture_score(const Graph& g, double tol) {
  if (g.n() < 3) throw HypothesisViolation("conjecture_score: needs at least 3 vertices");
  if (!is_connected(g)) throw HypothesisViolation("conjecture_score: graph is disconnected");
  Score s;
  s.lambda = lambda_max(g, tol);
  s.mu = matching_number(g);
  s.value = s.lambda + static_cast<double>(s.mu) - std::sqrt(static_cast<double>(g.n() - 1)) - 1.0;
  return s;
}

}  // namespace dlmath::graph
