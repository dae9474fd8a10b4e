#pragma once

#include <cstdint>
#include <string_view>

#include "dlmath/nn/mlp.hpp"

namespace dlmath::nn {

enum class OptimizerKind { kSgd, kAdam };
/// Per-epoch learning-rate multiplier for multi-epoch runs.
enum class LrSchedule { kConstant, kCosine };

std::string_view to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(std::string_view name);
std::string_view to_string(LrSchedule schedule);
LrSchedule schedule_from_string(std::string_view name);

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t max_epochs = 10;
  std::uint64_t seed = 0;
  LrSchedule schedule = LrSchedule::kConstant;

  /// Learning rate for a 1-based epoch. Cosine decays from learning_rate
  /// towards 0 over max_epochs, constant per epoch.
  double learning_rate_at(std::size_t epoch) const;

  /// Throws std::invalid_argument when learning_rate <= 0 or batch_size == 0.
  /// A zero learning rate is accepted when allow_zero_lr is set (frozen runs).
  void validate(bool allow_zero_lr = false) const;
};

/// First/second moment estimates for the adaptive optimizer. Empty for SGD.
struct OptimizerState {
  std::uint64_t step = 0;
  Gradients first_moment;
  Gradients second_moment;
};

/// In-place parameter update. SGD: w -= lr g. Adam: bias-corrected moment
/// update, w -= lr m_hat / (sqrt(v_hat) + eps).
void optimizer_step(Mlp& m, const Gradients& grads, const TrainConfig& cfg,
                    OptimizerState& state);

}  // namespace dlmath::nn
