#include "dlmath/nn/optim.hpp"

#include <cmath>
#include <numbers>

namespace dlmath::nn {

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

OptimizerKind optimizer_from_string(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) + "' (expected sgd or adam)");
}

std::string_view to_string(LrSchedule schedule) {
  return schedule == LrSchedule::kConstant ? "constant" : "cosine";
}

LrSchedule schedule_from_string(std::string_view name) {
  if (name == "constant") return LrSchedule::kConstant;
  if (name == "cosine") return LrSchedule::kCosine;
  throw std::invalid_argument("unknown schedule '" + std::string(name) + "' (expected constant or cosine)");
}

double TrainConfig::learning_rate_at(std::size_t epoch) const {
  if (schedule == LrSchedule::kConstant || max_epochs <= 1) return learning_rate;
  const double progress = static_cast<double>(epoch - 1) / static_cast<double>(max_epochs);
  return learning_rate * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

void TrainConfig::validate(bool allow_zero_lr) const {
  if (!(learning_rate > 0.0) && !(allow_zero_lr && learning_rate == 0.0))
    throw std::invalid_argument("learning_rate must be positive");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be at least 1");
  if (optimizer == OptimizerKind::kAdam) {
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
      throw std::invalid_argument("adam betas must lie in [0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("adam epsilon must be positive");
  }
}

namespace {

void check_shapes(const Mlp& m, const Gradients& g) {
  if (g.weights.size() != m.num_layers() || g.bias.size() != m.num_layers())
    throw ShapeError("optimizer_step: gradient depth does not match network");
  for (std::size_t k = 0; k < m.num_layers(); ++k) {
    const auto& l = m.layer(k);
    if (g.weights[k].rows() != l.weights.rows() || g.weights[k].cols() != l.weights.cols() ||
        g.bias[k].size() != l.bias.size())
      throw ShapeError("optimizer_step: gradient shape mismatch at layer " + std::to_string(k));
  }
}

}  // namespace

void optimizer_step(Mlp& m, const Gradients& grads, const TrainConfig& cfg, OptimizerState& state) {
  check_shapes(m, grads);
  auto layers = m.parameters();
  const double lr = cfg.learning_rate;

  if (cfg.optimizer == OptimizerKind::kSgd) {
    for (std::size_t k = 0; k < layers.size(); ++k) {
      layers[k].weights -= lr * grads.weights[k];
      layers[k].bias -= lr * grads.bias[k];
    }
    ++state.step;
    return;
  }

  if (state.first_moment.weights.empty()) {
    state.first_moment = Gradients::zeros_like(m);
    state.second_moment = Gradients::zeros_like(m);
  }
  ++state.step;
  const double b1 = cfg.beta1;
  const double b2 = cfg.beta2;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  const double eps = cfg.epsilon;

  auto update = [&](auto& param, const auto& g, auto& mom1, auto& mom2) {
    mom1 = b1 * mom1 + (1.0 - b1) * g;
    mom2 = b2 * mom2 + (1.0 - b2) * g.cwiseProduct(g);
    param.array() -= lr * (mom1.array() / c1) / ((mom2.array() / c2).sqrt() + eps);
  };
  for (std::size_t k = 0; k < layers.size(); ++k) {
    update(layers[k].weights, grads.weights[k], state.first_moment.weights[k],
           state.second_moment.weights[k]);
    update(layers[k].bias, grads.bias[k], state.first_moment.bias[k], state.second_moment.bias[k]);
  }
}

}  // namespace dlmath::nn
