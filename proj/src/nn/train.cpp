#include "dlmath/nn/train.hpp"

#include <algorithm>
#include <cmath>

namespace dlmath::nn {

void LabeledDataset::validate() const {
  const std::size_t n = size();
  if (targets.size() > 0 && static_cast<std::size_t>(targets.rows()) != n)
    throw ShapeError("dataset: targets not aligned with inputs");
  if (!classes.empty() && classes.size() != n)
    throw ShapeError("dataset: class labels not aligned with inputs");
  if (targets.size() == 0 && classes.empty()) throw ShapeError("dataset: no targets");
  std::vector<char> seen(n, 0);
  for (const auto* split : {&train, &validation, &test}) {
    for (auto i : *split) {
      if (i >= n) throw std::out_of_range("dataset: split index out of range");
      if (seen[i]) throw std::invalid_argument("dataset: splits overlap at row " + std::to_string(i));
      seen[i] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw std::invalid_argument("dataset: splits do not cover every row");
}

Mat gather_rows(const Mat& m, std::span<const std::size_t> rows) {
  Mat out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

LossResult compute_loss(LossKind kind, const Mat& outputs, const LabeledDataset& data,
                        std::span<const std::size_t> rows) {
  switch (kind) {
    case LossKind::kBinaryCrossEntropy:
      return loss_bce(outputs, gather_rows(data.targets, rows));
    case LossKind::kMeanSquared:
      return loss_mse(outputs, gather_rows(data.targets, rows));
    case LossKind::kCrossEntropy: {
      std::vector<std::size_t> cls(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) cls[i] = data.classes.at(rows[i]);
      return loss_ce(outputs, cls);
    }
  }
  throw std::logic_error("unknown loss kind");
}

namespace {

struct Hits {
  std::size_t positions = 0;
  std::size_t position_total = 0;
  std::size_t exact = 0;
};

Hits count_hits(LossKind kind, const Mat& outputs, const LabeledDataset& data,
                std::span<const std::size_t> rows) {
  Hits h;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const auto src = static_cast<Eigen::Index>(rows[i]);
    if (kind == LossKind::kCrossEntropy) {
      Eigen::Index best = 0;
      outputs.row(r).maxCoeff(&best);
      const bool ok = static_cast<std::size_t>(best) == data.classes[rows[i]];
      h.positions += ok;
      h.exact += ok;
      ++h.position_total;
      continue;
    }
    bool all = true;
    for (Eigen::Index j = 0; j < outputs.cols(); ++j) {
      const double t = data.targets(src, j);
      const double y = outputs(r, j);
      const bool ok = kind == LossKind::kBinaryCrossEntropy ? ((y >= 0.0) == (t >= 0.5))
                                                            : std::abs(y - t) < 0.5;
      h.positions += ok;
      all = all && ok;
    }
    h.position_total += static_cast<std::size_t>(outputs.cols());
    h.exact += all;
  }
  return h;
}

}  // namespace

EpochMetrics train_epoch(Mlp& m, const LabeledDataset& data, const TrainConfig& cfg,
                         LossKind loss, OptimizerState& state, std::mt19937_64& rng) {
  if (data.train.empty()) throw std::invalid_argument("train_epoch: empty training split");
  if (data.input_dim() != m.input_dim())
    throw ShapeError("train_epoch: dataset input dim does not match network");
  cfg.validate(/*allow_zero_lr=*/true);

  std::vector<std::size_t> order = data.train;
  std::shuffle(order.begin(), order.end(), rng);

  double loss_sum = 0.0;
  std::size_t hits = 0;
  std::size_t hit_total = 0;
  ForwardCache cache;
  for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
    const std::size_t end = std::min(order.size(), start + cfg.batch_size);
    std::span<const std::size_t> rows(order.data() + start, end - start);
    const Mat out = forward(m, gather_rows(data.inputs, rows), &cache);
    const LossResult lr = compute_loss(loss, out, data, rows);
    loss_sum += lr.value * static_cast<double>(rows.size());
    const Hits h = count_hits(loss, out, data, rows);
    hits += h.positions;
    hit_total += h.position_total;
    optimizer_step(m, backward(m, cache, lr.grad), cfg, state);
  }
  return {loss_sum / static_cast<double>(order.size()),
          static_cast<double>(hits) / static_cast<double>(hit_total)};
}

EvalMetrics evaluate(const Mlp& m, const LabeledDataset& data, std::span<const std::size_t> rows,
                     LossKind loss) {
  if (rows.empty()) return {};
  constexpr std::size_t kChunk = 4096;
  double loss_sum = 0.0;
  Hits total;
  for (std::size_t start = 0; start < rows.size(); start += kChunk) {
    const auto chunk = rows.subspan(start, std::min(kChunk, rows.size() - start));
    const Mat out = forward(m, gather_rows(data.inputs, chunk));
    loss_sum += compute_loss(loss, out, data, chunk).value * static_cast<double>(chunk.size());
    const Hits h = count_hits(loss, out, data, chunk);
    total.positions += h.positions;
    total.position_total += h.position_total;
    total.exact += h.exact;
  }
  const auto n = static_cast<double>(rows.size());
  return {loss_sum / n, static_cast<double>(total.positions) / static_cast<double>(total.position_total),
          static_cast<double>(total.exact) / n};
}

}  // namespace dlmath::nn
