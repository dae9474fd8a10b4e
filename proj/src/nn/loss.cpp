#include "dlmath/nn/loss.hpp"

#include <cmath>

namespace dlmath::nn {

LossResult loss_bce(const Mat& logits, const Mat& targets) {
  if (logits.rows() != targets.rows() || logits.cols() != targets.cols())
    throw ShapeError("loss_bce: logits and targets differ in shape");
  const auto count = static_cast<double>(logits.size());
  LossResult r;
  r.grad.resize(logits.rows(), logits.cols());
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    const double z = logits.data()[i];
    const double t = targets.data()[i];
    total += std::max(z, 0.0) - z * t + std::log1p(std::exp(-std::abs(z)));
    r.grad.data()[i] = (sigmoid(z) - t) / count;
  }
  r.value = count > 0 ? total / count : 0.0;
  return r;
}

LossResult loss_bce(const Vec& logits, const Vec& targets) {
  return loss_bce(Mat(logits), Mat(targets));
}

LossResult loss_ce(const Mat& logits, std::span<const std::size_t> classes) {
  if (static_cast<std::size_t>(logits.rows()) != classes.size())
    throw ShapeError("loss_ce: one class index per row required");
  const auto rows = static_cast<double>(logits.rows());
  LossResult r;
  r.grad.resize(logits.rows(), logits.cols());
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const auto cls = classes[static_cast<std::size_t>(i)];
    if (cls >= static_cast<std::size_t>(logits.cols()))
      throw std::out_of_range("loss_ce: class index " + std::to_string(cls) + " out of range");
    const double max = logits.row(i).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) sum += std::exp(logits(i, j) - max);
    const double log_sum = max + std::log(sum);
    total += log_sum - logits(i, static_cast<Eigen::Index>(cls));
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      const double p = std::exp(logits(i, j) - log_sum);
      r.grad(i, j) = (p - (static_cast<std::size_t>(j) == cls ? 1.0 : 0.0)) / rows;
    }
  }
  r.value = rows > 0 ? total / rows : 0.0;
  return r;
}

LossResult loss_ce(const Vec& logits, std::size_t cls) {
  const std::size_t classes[] = {cls};
  return loss_ce(Mat(logits.transpose()), classes);
}

LossResult loss_mse(const Mat& pred, const Mat& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw ShapeError("loss_mse: prediction and target differ in shape");
  const auto count = static_cast<double>(pred.size());
  LossResult r;
  const Mat diff = pred - target;
  r.value = count > 0 ? diff.squaredNorm() / count : 0.0;
  r.grad = 2.0 * diff / count;
  return r;
}

LossResult loss_mse(const Vec& pred, const Vec& target) {
  return loss_mse(Mat(pred), Mat(target));
}

}  // namespace dlmath::nn
