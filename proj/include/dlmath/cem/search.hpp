#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <json.hpp>

#include "dlmath/cem/game.hpp"
#include "dlmath/cem/objective.hpp"
#include "dlmath/nn/optim.hpp"

namespace dlmath::cem {

struct CemConfig {
  std::size_t n = 19;
  std::size_t episodes_per_iter = 1000;
  double elite_fraction = 0.10;
  std::vector<std::size_t> policy_dims{128, 64};
  nn::TrainConfig train{};
  double disconnect_penalty = 10.0;
  std::size_t max_iters = 1000;
  /// Stop once a verified graph scores below this.
  double target_score = 0.0;
  /// Required distance below target_score when re-verifying.
  double verify_margin = 1e-9;
  std::size_t checkpoint_interval = 10;
  std::string objective = "conjecture";
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument.
  void validate() const;
  std::size_t elite_count() const;
};

nlohmann::json to_json(const CemConfig& cfg);
/// Missing keys take their defaults; unknown keys are rejected.
CemConfig cem_config_from_json(const nlohmann::json& j);

struct StateAction {
  GameState state;
  std::uint8_t action = 0;
};

/// Indices of the ceil(fraction * len) lowest-scoring episodes; ties keep
/// sampling order.
std::vector<std::size_t> elite_indices(std::span<const Episode> episodes, double fraction);
/// All (state, action) pairs of the elite episodes, elite order then step order.
std::vector<StateAction> select_elite(std::span<const Episode> episodes, double fraction);

/// Episodes 0..count-1 of iteration `iter`. Episode i uses its own stream
/// derived from (seed, iter, i), and episodes are batched in fixed blocks,
/// so the result does not depend on the worker count.
std::vector<Episode> sample_episodes(const nn::Mlp& policy, std::size_t n, const Objective& objective,
                                     std::uint64_t seed, std::size_t iter, std::size_t count,
                                     std::size_t workers = 1);

struct IterationResult {
  double iter_best_score = 0.0;
  double elite_mean_score = 0.0;
  double policy_loss = 0.0;
  graph::Graph best_graph{1};
};

/// Build the policy network [2E, policy_dims..., 1] for cfg.
nn::Mlp make_policy(const CemConfig& cfg);

/// Sample, select the elite, and fit the policy to the elite actions with
/// one BCE pass.
IterationResult cem_iteration(nn::Mlp& policy, nn::OptimizerState& opt, const CemConfig& cfg,
                              const Objective& objective, std::size_t iter, std::size_t workers = 1);

struct IterationRecord {
  std::size_t iter = 0;
  double best_so_far = 0.0;
  double iter_best = 0.0;
  double elite_mean = 0.0;
  double policy_loss = 0.0;
  double wallclock_s = 0.0;
};

struct HuntLog {
  std::vector<IterationRecord> records;
  std::optional<graph::Graph> best_graph;
  double best_score = std::numeric_limits<double>::infinity();
  bool found = false;
  std::optional<Verification> verification;
};

struct HuntState {
  nn::Mlp policy;
  nn::OptimizerState optimizer;
  std::size_t next_iter = 1;
  HuntLog log;
};

struct HuntOptions {
  std::size_t workers = 1;
  /// Called every cfg.checkpoint_interval iterations and once at the end.
  std::function<void(const HuntState&)> on_checkpoint;
  std::function<void(const IterationRecord&)> on_iteration;
  /// Checked after every iteration; returning true ends the hunt early
  /// (for wallclock budgets).
  std::function<bool()> should_stop;
};

HuntState initial_hunt_state(const CemConfig& cfg);

/// Runs iterations until a verified score below cfg.target_score is found or
/// cfg.max_iters iterations have run in total.
HuntLog hunt(const CemConfig& cfg, const Objective& objective, const HuntOptions& options = {},
             std::optional<HuntState> resume = std::nullopt);

/// Hunt checkpoint: the network checkpoint fields plus a "hunt" object.
nlohmann::json hunt_state_to_json(const HuntState& state);
HuntState hunt_state_from_json(const nlohmann::json& j);

/// iter,best_so_far,iter_best,elite_mean,policy_loss
std::string hunt_log_csv(const HuntLog& log);
/// iter,wallclock_s
std::string hunt_timing_csv(const HuntLog& log);

}  // namespace dlmath::cem
