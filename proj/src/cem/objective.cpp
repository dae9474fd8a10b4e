#include "dlmath/cem/objective.hpp"

#include <cmath>
#include <sstream>

namespace dlmath::cem {

Verification Objective::verify(const graph::Graph& g, double target, double margin) const {
  Verification v;
  v.recomputed = score(g);
  v.ok = v.recomputed < target - margin;
  v.detail = name() + " score " + std::to_string(v.recomputed);
  return v;
}

double score_episode(const graph::Graph& g, double disconnect_penalty) {
  const std::size_t components = graph::component_count(g);
  if (components == 1 && g.n() >= 3) return graph::conjecture_score(g).value;
  return disconnect_penalty + static_cast<double>(components - 1);
}

double ConjectureObjective::score(const graph::Graph& g) const {
  const std::size_t components = graph::component_count(g);
  if (components == 1 && g.n() >= 3) return graph::conjecture_score(g, tol_).value;
  return penalty_ + static_cast<double>(components - 1);
}

Verification ConjectureObjective::verify(const graph::Graph& g, double target, double margin) const {
  Verification v;
  std::ostringstream detail;
  detail.precision(17);
  if (g.n() < 3 || !graph::is_connected(g)) {
    v.recomputed = score(g);
    detail << "graph is disconnected or has fewer than 3 vertices";
    v.detail = detail.str();
    return v;
  }
  const double lambda_power = graph::lambda_max(g, tol_);
  const double lambda_dense = graph::lambda_max_jacobi(g);
  const std::size_t mu = graph::matching_number(g);
  bool ok = std::abs(lambda_power - lambda_dense) < 1e-8;
  detail << "lambda(power)=" << lambda_power << " lambda(jacobi)=" << lambda_dense << " mu(blossom)=" << mu;
  if (g.n() <= graph::kBruteForceMaxVertices) {
    const std::size_t mu_brute = graph::matching_number_bruteforce(g);
    detail << " mu(bruteforce)=" << mu_brute;
    ok = ok && mu_brute == mu;
  }
  v.recomputed = lambda_dense + static_cast<double>(mu) - std::sqrt(static_cast<double>(g.n() - 1)) - 1.0;
  detail << " value(jacobi)=" << v.recomputed;
  v.ok = ok && v.recomputed < target - margin;
  v.detail = detail.str();
  return v;
}

std::unique_ptr<Objective> make_objective(const std::string& name, double disconnect_penalty) {
  if (name == "conjecture") return std::make_unique<ConjectureObjective>(disconnect_penalty);
  if (name == "edge_count") return std::make_unique<EdgeCountObjective>();
  throw std::invalid_argument("unknown objective '" + name + "' (expected conjecture or edge_count)");
}

}  // namespace dlmath::cem
