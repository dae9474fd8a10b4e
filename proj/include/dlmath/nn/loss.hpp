#pragma once

#include <span>

#include "dlmath/nn/mlp.hpp"

namespace dlmath::nn {

enum class LossKind { kBinaryCrossEntropy, kCrossEntropy, kMeanSquared };

struct LossResult {
  double value = 0.0;
  /// d value / d input, same shape as the first argument (a column for
  /// vectors, except loss_ce where a vector is one 1 x k sample).
  Mat grad;
};

/// Mean over all entries of the sigmoid cross entropy, in the fused
/// max(z,0) - z t + log1p(exp(-|z|)) form.
LossResult loss_bce(const Mat& logits, const Mat& targets);
LossResult loss_bce(const Vec& logits, const Vec& targets);

/// Mean over rows of -log softmax(row)[class].
LossResult loss_ce(const Mat& logits, std::span<const std::size_t> classes);
LossResult loss_ce(const Vec& logits, std::size_t cls);

/// Mean over all entries of the squared difference.
LossResult loss_mse(const Mat& pred, const Mat& target);
LossResult loss_mse(const Vec& pred, const Vec& target);

}  // namespace dlmath::nn
