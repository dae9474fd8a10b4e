#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlmath/experiments/datasets.hpp"
#include "dlmath/nn/optim.hpp"
#include "dlmath/nn/train.hpp"

namespace dlmath::experiments {

enum class Task { kParity, kDescentLeft, kDescentRight };

std::string_view to_string(Task task);
Task task_from_string(std::string_view name);

struct ExperimentSpec {
  Task task = Task::kDescentRight;
  /// Bits for parity, permutation size for descents.
  std::size_t size = 35;
  Representation representation = Representation::kOneLine;
  double train_fraction = 0.5;  // parity
  std::size_t num_train = 20000;  // descents
  std::size_t num_val = 5000;
  bool exhaustive = false;
  std::vector<std::size_t> hidden{500, 100};
  nn::TrainConfig train{};
  std::uint64_t seed = 0;
  /// Multiplies every He-initialized weight.
  double init_gain = 1.0;
  /// Feed bits as -1/+1 instead of 0/1 (parity only).
  bool signed_inputs = false;

  /// Throws std::invalid_argument when the representation does not fit the task.
  void validate() const;
};

/// Defaults for a task: parity m=10 with hidden [64, 64], signed inputs,
/// init gain 0.03 and full-batch Adam (lr 3e-3) for 500 epochs; descents
/// n=35 one-line with hidden [500, 100] and 20 cosine-scheduled epochs.
ExperimentSpec default_spec(Task task);

nlohmann::json to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_spec_from_json(const nlohmann::json& j);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double val_loss = 0.0;
  double val_per_position_acc = 0.0;
  double val_exact_acc = 0.0;
};

struct ExperimentResult {
  std::vector<EpochRecord> epochs;
  /// Both evaluated after the last epoch.
  nn::EvalMetrics validation;
  nn::EvalMetrics train;
  double wallclock_s = 0.0;
  nn::Mlp model{{nn::AffineLayer{nn::Mat::Zero(1, 1), nn::Vec::Zero(1)}}};
};

nn::LabeledDataset build_dataset(const ExperimentSpec& spec);

/// Trains [input, hidden..., output] with BCE for train.max_epochs epochs and
/// evaluates on the validation split (prediction threshold 0.5).
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::function<void(const EpochRecord&)>& on_epoch = {});

/// epoch,train_loss,train_acc,val_loss,val_per_position_acc,val_exact_acc
std::string epochs_csv(const std::vector<EpochRecord>& epochs);

struct SaliencyEntry {
  std::size_t coordinate = 0;
  double mean_abs_grad = 0.0;
};

/// Mean |d output[position] / d input| over the validation inputs, sorted by
/// decreasing magnitude (ties by coordinate).
std::vector<SaliencyEntry> saliency_report(const nn::Mlp& model, const nn::LabeledDataset& data,
                                           std::size_t position);
std::string saliency_csv(const std::vector<SaliencyEntry>& report);

}  // namespace dlmath::experiments
