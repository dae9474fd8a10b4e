#pragma once

#include <memory>
#include <optional>
#include <string>

#include "dlmath/graph/graph.hpp"
#include "dlmath/graph/invariants.hpp"

namespace dlmath::cem {

struct Verification {
  bool ok = false;
  /// Score recomputed along the independent route.
  double recomputed = 0.0;
  std::string detail;
};

/// Quantity minimized by the search. Scores below the target are
/// counterexamples; verify() re-derives the score independently.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::string name() const = 0;
  virtual double score(const graph::Graph& g) const = 0;
  /// Default: recompute score() and require it below target - margin.
  virtual Verification verify(const graph::Graph& g, double target, double margin) const;
};

/// lambda + mu - sqrt(n-1) - 1 for connected graphs with n >= 3; otherwise
/// penalty + (components - 1).
class ConjectureObjective final : public Objective {
 public:
  explicit ConjectureObjective(double disconnect_penalty = 10.0, double tol = 1e-10)
      : penalty_(disconnect_penalty), tol_(tol) {}

  std::string name() const override { return "conjecture"; }
  double score(const graph::Graph& g) const override;
  /// Rechecks connectivity, lambda by Jacobi against power iteration, and mu
  /// by brute force (n <= 12) against blossom.
  Verification verify(const graph::Graph& g, double target, double margin) const override;

  double disconnect_penalty() const { return penalty_; }
  double tolerance() const { return tol_; }

 private:
  double penalty_;
  double tol_;
};

/// Number of edges. A planted objective with a known optimum, for testing
/// the search machinery.
class EdgeCountObjective final : public Objective {
 public:
  std::string name() const override { return "edge_count"; }
  double score(const graph::Graph& g) const override { return static_cast<double>(g.edge_count()); }
};

double score_episode(const graph::Graph& g, double disconnect_penalty = 10.0);

/// "conjecture" or "edge_count". Throws std::invalid_argument otherwise.
std::unique_ptr<Objective> make_objective(const std::string& name, double disconnect_penalty);

}  // namespace dlmath::cem
