#pragma once

#include <random>
#include <vector>

#include "dlmath/nn/loss.hpp"
#include "dlmath/nn/mlp.hpp"
#include "dlmath/nn/optim.hpp"

namespace dlmath::nn {

/// Inputs with either 0/1 target vectors (BCE, MSE) or class indices (CE),
/// split into disjoint train / validation / test index sets.
struct LabeledDataset {
  Mat inputs;
  Mat targets;
  std::vector<std::size_t> classes;
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;

  std::size_t size() const { return static_cast<std::size_t>(inputs.rows()); }
  std::size_t input_dim() const { return static_cast<std::size_t>(inputs.cols()); }

  /// Checks aligned lengths and that the splits are disjoint and covering.
  void validate() const;
};

struct EpochMetrics {
  double train_loss = 0.0;
  double train_acc = 0.0;
};

struct EvalMetrics {
  double loss = 0.0;
  /// Fraction of (sample, output) pairs predicted correctly.
  double per_position_acc = 0.0;
  /// Fraction of samples with every output correct.
  double exact_acc = 0.0;
};

Mat gather_rows(const Mat& m, std::span<const std::size_t> rows);

LossResult compute_loss(LossKind kind, const Mat& outputs, const LabeledDataset& data,
                        std::span<const std::size_t> rows);

/// Shuffles the train split with rng, then one optimizer step per minibatch.
/// Loss and accuracy are averaged over the epoch, measured before each step.
EpochMetrics train_epoch(Mlp& m, const LabeledDataset& data, const TrainConfig& cfg,
                         LossKind loss, OptimizerState& state, std::mt19937_64& rng);

EvalMetrics evaluate(const Mlp& m, const LabeledDataset& data,
                     std::span<const std::size_t> rows, LossKind loss);

}  // namespace dlmath::nn
