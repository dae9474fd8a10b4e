#include "dlmath/experiments/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "dlmath/nn/checkpoint.hpp"
#include "dlmath/rng.hpp"

namespace dlmath::experiments {

using nlohmann::json;

std::string_view to_string(Task task) {
  switch (task) {
    case Task::kParity: return "parity";
    case Task::kDescentLeft: return "descent-left";
    case Task::kDescentRight: return "descent-right";
  }
  return "?";
}

Task task_from_string(std::string_view name) {
  if (name == "parity") return Task::kParity;
  if (name == "descent-left") return Task::kDescentLeft;
  if (name == "descent-right") return Task::kDescentRight;
  throw std::invalid_argument("unknown task '" + std::string(name) +
                              "' (expected parity, descent-left or descent-right)");
}

void ExperimentSpec::validate() const {
  if (task == Task::kParity) {
    if (representation != Representation::kRawBits)
      throw std::invalid_argument("parity experiments use the raw-bits representation");
    if (size == 0 || size > kMaxParityBits) throw std::invalid_argument("parity: m must lie in 1..20");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw std::invalid_argument("parity: train_fraction must lie in (0, 1)");
  } else {
    if (representation == Representation::kRawBits)
      throw std::invalid_argument("descent experiments use one-line or perm-matrix inputs");
    if (size < 2) throw std::invalid_argument("descent: n must be at least 2");
    if (num_train == 0 || num_val == 0) throw std::invalid_argument("descent: split sizes must be positive");
  }
  if (!(init_gain > 0.0) || !std::isfinite(init_gain)) throw std::invalid_argument("init_gain must be positive");
  if (signed_inputs && task != Task::kParity) throw std::invalid_argument("signed_inputs applies to parity only");
  for (auto h : hidden)
    if (h == 0) throw std::invalid_argument("hidden layer sizes must be positive");
  train.validate(/*allow_zero_lr=*/true);
}

ExperimentSpec default_spec(Task task) {
  ExperimentSpec spec;
  spec.task = task;
  if (task == Task::kParity) {
    spec.size = 10;
    spec.representation = Representation::kRawBits;
    spec.hidden = {64, 64};
    spec.init_gain = 0.03;
    spec.signed_inputs = true;
    spec.train.learning_rate = 3e-3;
    spec.train.batch_size = 512;
    spec.train.max_epochs = 500;
  } else {
    spec.train.max_epochs = 20;
    spec.train.schedule = nn::LrSchedule::kCosine;
  }
  return spec;
}

json to_json(const ExperimentSpec& spec) {
  json j{{"task", std::string(to_string(spec.task))},
         {"representation", std::string(to_string(spec.representation))},
         {"hidden", spec.hidden},
         {"train", nn::train_config_to_json(spec.train)},
         {"seed", spec.seed},
         {"init_gain", spec.init_gain}};
  if (spec.task == Task::kParity) {
    j["m"] = spec.size;
    j["train_fraction"] = spec.train_fraction;
    j["signed_inputs"] = spec.signed_inputs;
  } else {
    j["n"] = spec.size;
    j["num_train"] = spec.num_train;
    j["num_val"] = spec.num_val;
    j["exhaustive"] = spec.exhaustive;
  }
  return j;
}

ExperimentSpec experiment_spec_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("experiment spec must be a JSON object");
  ExperimentSpec spec = default_spec(task_from_string(j.at("task").get<std::string>()));
  for (const auto& [key, value] : j.items()) {
    if (key == "task") continue;
    if (key == "m" || key == "n") spec.size = value.get<std::size_t>();
    else if (key == "representation") spec.representation = representation_from_string(value.get<std::string>());
    else if (key == "train_fraction") spec.train_fraction = value.get<double>();
    else if (key == "num_train") spec.num_train = value.get<std::size_t>();
    else if (key == "num_val") spec.num_val = value.get<std::size_t>();
    else if (key == "exhaustive") spec.exhaustive = value.get<bool>();
    else if (key == "hidden") spec.hidden = value.get<std::vector<std::size_t>>();
    else if (key == "train") spec.train = nn::train_config_from_json(value, spec.train);
    else if (key == "seed") spec.seed = value.get<std::uint64_t>();
    else if (key == "init_gain") spec.init_gain = value.get<double>();
    else if (key == "signed_inputs") spec.signed_inputs = value.get<bool>();
    else throw std::invalid_argument("unknown experiment spec key '" + key + "'");
  }
  spec.validate();
  return spec;
}

nn::LabeledDataset build_dataset(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.task == Task::kParity) {
    auto data = gen_parity_dataset(spec.size, spec.train_fraction, spec.seed);
    if (spec.signed_inputs) data.inputs = (2.0 * data.inputs.array() - 1.0).matrix();
    return data;
  }
  DescentDataOptions opts;
  opts.n = spec.size;
  opts.side = spec.task == Task::kDescentLeft ? DescentSide::kLeft : DescentSide::kRight;
  opts.representation = spec.representation;
  opts.num_train = spec.num_train;
  opts.num_val = spec.num_val;
  opts.seed = spec.seed;
  opts.exhaustive = spec.exhaustive;
  return gen_descent_dataset(opts);
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const std::function<void(const EpochRecord&)>& on_epoch) {
  const auto start = std::chrono::steady_clock::now();
  const auto data = build_dataset(spec);

  std::vector<std::size_t> dims{data.input_dim()};
  dims.insert(dims.end(), spec.hidden.begin(), spec.hidden.end());
  dims.push_back(static_cast<std::size_t>(data.targets.cols()));
  nn::Mlp model = nn::init_he(dims, spec.train.seed);
  if (spec.init_gain != 1.0)
    for (auto& layer : model.parameters()) layer.weights *= spec.init_gain;

  nn::OptimizerState opt;
  std::mt19937_64 rng(derive_seed(spec.train.seed, 1));
  constexpr auto kLoss = nn::LossKind::kBinaryCrossEntropy;
  ExperimentResult result;
  for (std::size_t epoch = 1; epoch <= spec.train.max_epochs; ++epoch) {
    nn::TrainConfig epoch_cfg = spec.train;
    epoch_cfg.learning_rate = spec.train.learning_rate_at(epoch);
    const auto m = nn::train_epoch(model, data, epoch_cfg, kLoss, opt, rng);
    const auto v = nn::evaluate(model, data, data.validation, kLoss);
    EpochRecord rec{epoch, m.train_loss, m.train_acc, v.loss, v.per_position_acc, v.exact_acc};
    result.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  result.validation = nn::evaluate(model, data, data.validation, kLoss);
  result.train = nn::evaluate(model, data, data.train, kLoss);
  result.model = std::move(model);
  result.wallclock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string epochs_csv(const std::vector<EpochRecord>& epochs) {
  std::string out = "epoch,train_loss,train_acc,val_loss,val_per_position_acc,val_exact_acc\n";
  for (const auto& e : epochs) {
    out += std::to_string(e.epoch) + ',' + real(e.train_loss) + ',' + real(e.train_acc) + ',' + real(e.val_loss) +
           ',' + real(e.val_per_position_acc) + ',' + real(e.val_exact_acc) + '\n';
  }
  return out;
}

std::vector<SaliencyEntry> saliency_report(const nn::Mlp& model, const nn::LabeledDataset& data,
                                           std::size_t position) {
  if (position >= model.output_dim())
    throw std::out_of_range("saliency_report: position " + std::to_string(position) + " out of range");
  std::vector<std::size_t> rows = data.validation;
  if (rows.empty()) {
    rows.resize(data.size());
    std::iota(rows.begin(), rows.end(), 0);
  }
  nn::ForwardCache cache;
  nn::forward(model, nn::gather_rows(data.inputs, rows), &cache);
  nn::Mat seed = nn::Mat::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(model.output_dim()));
  seed.col(static_cast<Eigen::Index>(position)).setOnes();
  const nn::Mat grads = nn::input_gradient(model, cache, seed);
  const nn::Vec mean = grads.cwiseAbs().colwise().mean().transpose();

  std::vector<SaliencyEntry> report(static_cast<std::size_t>(mean.size()));
  for (std::size_t i = 0; i < report.size(); ++i) report[i] = {i, mean[static_cast<Eigen::Index>(i)]};
  std::stable_sort(report.begin(), report.end(),
                   [](const SaliencyEntry& a, const SaliencyEntry& b) { return a.mean_abs_grad > b.mean_abs_grad; });
  return report;
}

std::string saliency_csv(const std::vector<SaliencyEntry>& report) {
  std::string out = "coordinate,mean_abs_grad\n";
  for (const auto& e : report) out += std::to_string(e.coordinate) + ',' + real(e.mean_abs_grad) + '\n';
  return out;
}

}  // namespace dlmath::experiments
