#include "dlmath/cem/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <thread>

#include "dlmath/nn/checkpoint.hpp"
#include "dlmath/nn/train.hpp"
#include "dlmath/rng.hpp"

namespace dlmath::cem {

using nlohmann::json;

namespace {

constexpr std::uint64_t kInitStream = 0x1217a11ULL;
constexpr std::uint64_t kEpisodeStream = 0xe915dULL;
constexpr std::uint64_t kTrainStream = 0x7a1aULL;
constexpr std::size_t kBlockSize = 64;

}  // namespace

void CemConfig::validate() const {
  if (n < 2) throw std::invalid_argument("cem: n must be at least 2");
  if (episodes_per_iter == 0) throw std::invalid_argument("cem: episodes_per_iter must be positive");
  if (!(elite_fraction > 0.0 && elite_fraction <= 1.0))
    throw std::invalid_argument("cem: elite_fraction must lie in (0, 1]");
  if (elite_fraction * static_cast<double>(episodes_per_iter) < 1.0)
    throw std::invalid_argument("cem: elite_fraction * episodes_per_iter must be at least 1");
  for (auto d : policy_dims)
    if (d == 0) throw std::invalid_argument("cem: policy_dims must be positive");
  if (!(verify_margin >= 0.0)) throw std::invalid_argument("cem: verify_margin must be non-negative");
  train.validate(/*allow_zero_lr=*/true);
}

std::size_t CemConfig::elite_count() const {
  return static_cast<std::size_t>(std::ceil(elite_fraction * static_cast<double>(episodes_per_iter) - 1e-9));
}

json to_json(const CemConfig& cfg) {
  return {{"n", cfg.n},
          {"episodes_per_iter", cfg.episodes_per_iter},
          {"elite_fraction", cfg.elite_fraction},
          {"policy_dims", cfg.policy_dims},
          {"train", nn::train_config_to_json(cfg.train)},
          {"disconnect_penalty", cfg.disconnect_penalty},
          {"max_iters", cfg.max_iters},
          {"target_score", cfg.target_score},
          {"verify_margin", cfg.verify_margin},
          {"checkpoint_interval", cfg.checkpoint_interval},
          {"objective", cfg.objective},
          {"seed", cfg.seed}};
}

CemConfig cem_config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("hunt config must be a JSON object");
  CemConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "n") cfg.n = value.get<std::size_t>();
    else if (key == "episodes_per_iter") cfg.episodes_per_iter = value.get<std::size_t>();
    else if (key == "elite_fraction") cfg.elite_fraction = value.get<double>();
    else if (key == "policy_dims") cfg.policy_dims = value.get<std::vector<std::size_t>>();
    else if (key == "train") cfg.train = nn::train_config_from_json(value);
    else if (key == "disconnect_penalty") cfg.disconnect_penalty = value.get<double>();
    else if (key == "max_iters") cfg.max_iters = value.get<std::size_t>();
    else if (key == "target_score") cfg.target_score = value.get<double>();
    else if (key == "verify_margin") cfg.verify_margin = value.get<double>();
    else if (key == "checkpoint_interval") cfg.checkpoint_interval = value.get<std::size_t>();
    else if (key == "objective") cfg.objective = value.get<std::string>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else throw std::invalid_argument("unknown hunt config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

std::vector<std::size_t> elite_indices(std::span<const Episode> episodes, double fraction) {
  if (episodes.empty()) throw std::invalid_argument("select_elite: no episodes");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("select_elite: fraction must lie in (0, 1]");
  std::vector<std::size_t> order(episodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return episodes[a].score < episodes[b].score; });
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(episodes.size()) - 1e-9)));
  order.resize(std::min(keep, order.size()));
  return order;
}

std::vector<StateAction> select_elite(std::span<const Episode> episodes, double fraction) {
  std::vector<StateAction> pairs;
  for (auto idx : elite_indices(episodes, fraction)) {
    const auto& ep = episodes[idx];
    for (std::size_t t = 0; t < ep.length(); ++t) pairs.push_back({ep.state(t), ep.actions[t]});
  }
  return pairs;
}

std::vector<Episode> sample_episodes(const nn::Mlp& policy, std::size_t n, const Objective& objective,
                                     std::uint64_t seed, std::size_t iter, std::size_t count,
                                     std::size_t workers) {
  std::vector<Episode> episodes(count);
  const std::size_t blocks = (count + kBlockSize - 1) / kBlockSize;
  auto run_block = [&](std::size_t block) {
    const std::size_t first = block * kBlockSize;
    const std::size_t size = std::min(kBlockSize, count - first);
    std::vector<std::mt19937_64> rngs;
    rngs.reserve(size);
    for (std::size_t i = 0; i < size; ++i) rngs.emplace_back(derive_seed(seed ^ kEpisodeStream, iter, first + i));
    auto played = play_block(policy, n, objective, first, rngs);
    std::move(played.begin(), played.end(), episodes.begin() + static_cast<std::ptrdiff_t>(first));
  };

  workers = std::max<std::size_t>(1, std::min(workers, blocks));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return episodes;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t b = w; b < blocks; b += workers) run_block(b);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return episodes;
}

nn::Mlp make_policy(const CemConfig& cfg) {
  std::vector<std::size_t> dims{policy_input_dim(cfg.n)};
  dims.insert(dims.end(), cfg.policy_dims.begin(), cfg.policy_dims.end());
  dims.push_back(1);
  return nn::init_he(dims, derive_seed(cfg.seed ^ kInitStream, 0));
}

IterationResult cem_iteration(nn::Mlp& policy, nn::OptimizerState& opt, const CemConfig& cfg,
                              const Objective& objective, std::size_t iter, std::size_t workers) {
  cfg.validate();
  const auto episodes = sample_episodes(policy, cfg.n, objective, cfg.seed, iter, cfg.episodes_per_iter, workers);
  const auto elite = elite_indices(episodes, cfg.elite_fraction);

  const std::size_t e = graph::EdgeOrder::edge_count(cfg.n);
  const auto ee = static_cast<Eigen::Index>(e);
  nn::LabeledDataset data;
  data.inputs = nn::Mat::Zero(static_cast<Eigen::Index>(elite.size() * e), 2 * ee);
  data.targets = nn::Mat::Zero(data.inputs.rows(), 1);
  IterationResult result;
  double score_sum = 0.0;
  Eigen::Index row = 0;
  for (auto idx : elite) {
    const auto& ep = episodes[idx];
    score_sum += ep.score;
    for (std::size_t t = 0; t < e; ++t, ++row) {
      for (std::size_t s = 0; s < t; ++s) data.inputs(row, static_cast<Eigen::Index>(s)) = ep.actions[s];
      data.inputs(row, ee + static_cast<Eigen::Index>(t)) = 1.0;
      data.targets(row, 0) = ep.actions[t];
    }
  }
  data.train.resize(static_cast<std::size_t>(row));
  std::iota(data.train.begin(), data.train.end(), 0);

  std::mt19937_64 rng(derive_seed(cfg.seed ^ kTrainStream, iter));
  const auto metrics = nn::train_epoch(policy, data, cfg.train, nn::LossKind::kBinaryCrossEntropy, opt, rng);

  result.iter_best_score = episodes[elite.front()].score;
  result.elite_mean_score = score_sum / static_cast<double>(elite.size());
  result.policy_loss = metrics.train_loss;
  result.best_graph = episodes[elite.front()].graph;
  return result;
}

HuntState initial_hunt_state(const CemConfig& cfg) {
  cfg.validate();
  return HuntState{make_policy(cfg), nn::OptimizerState{}, 1, HuntLog{}};
}

HuntLog hunt(const CemConfig& cfg, const Objective& objective, const HuntOptions& options,
             std::optional<HuntState> resume) {
  cfg.validate();
  HuntState state = resume ? std::move(*resume) : initial_hunt_state(cfg);
  if (state.policy.input_dim() != policy_input_dim(cfg.n))
    throw nn::ShapeError("hunt: resumed policy does not match n=" + std::to_string(cfg.n));

  const auto start = std::chrono::steady_clock::now();
  auto& log = state.log;
  while (!log.found && state.next_iter <= cfg.max_iters) {
    const std::size_t iter = state.next_iter;
    const auto res = cem_iteration(state.policy, state.optimizer, cfg, objective, iter, options.workers);
    if (res.iter_best_score < log.best_score) {
      log.best_score = res.iter_best_score;
      log.best_graph = res.best_graph;
      if (log.best_score < cfg.target_score) {
        log.verification = objective.verify(*log.best_graph, cfg.target_score, cfg.verify_margin);
        log.found = log.verification->ok;
      }
    }
    IterationRecord rec{iter, log.best_score, res.iter_best_score, res.elite_mean_score, res.policy_loss,
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
    log.records.push_back(rec);
    state.next_iter = iter + 1;
    if (options.on_iteration) options.on_iteration(rec);
    if (options.on_checkpoint && cfg.checkpoint_interval > 0 && iter % cfg.checkpoint_interval == 0 && !log.found)
      options.on_checkpoint(state);
    if (options.should_stop && options.should_stop()) break;
  }
  if (options.on_checkpoint) options.on_checkpoint(state);
  return std::move(state.log);
}

json hunt_state_to_json(const HuntState& state) {
  json j = nn::checkpoint_to_json(nn::Checkpoint{state.policy, state.optimizer, std::nullopt});
  json records = json::array();
  for (const auto& r : state.log.records)
    records.push_back({r.iter, r.best_so_far, r.iter_best, r.elite_mean, r.policy_loss});
  json h{{"next_iter", state.next_iter}, {"found", state.log.found}, {"records", std::move(records)}};
  h["best_score"] = std::isfinite(state.log.best_score) ? json(state.log.best_score) : json(nullptr);
  h["best_graph"] = state.log.best_graph ? graph::graph_to_json(*state.log.best_graph) : json(nullptr);
  j["hunt"] = std::move(h);
  return j;
}

HuntState hunt_state_from_json(const json& j) {
  auto ckpt = nn::checkpoint_from_json(j);
  try {
    const auto& h = j.at("hunt");
    HuntState state{std::move(ckpt.model), ckpt.optimizer_state.value_or(nn::OptimizerState{}),
                    h.at("next_iter").get<std::size_t>(), HuntLog{}};
    state.log.found = h.at("found").get<bool>();
    for (const auto& r : h.at("records")) {
      state.log.records.push_back({r.at(0).get<std::size_t>(), r.at(1).get<double>(), r.at(2).get<double>(),
                                   r.at(3).get<double>(), r.at(4).get<double>(), 0.0});
    }
    if (!h.at("best_score").is_null()) state.log.best_score = h["best_score"].get<double>();
    if (!h.at("best_graph").is_null()) state.log.best_graph = graph::graph_from_json(h["best_graph"]);
    return state;
  } catch (const json::exception& e) {
    throw nn::CheckpointError(std::string("malformed hunt checkpoint: ") + e.what());
  }
}

namespace {

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string hunt_log_csv(const HuntLog& log) {
  std::string out = "iter,best_so_far,iter_best,elite_mean,policy_loss\n";
  for (const auto& r : log.records) {
    out += std::to_string(r.iter) + ',' + real(r.best_so_far) + ',' + real(r.iter_best) + ',' +
           real(r.elite_mean) + ',' + real(r.policy_loss) + '\n';
  }
  return out;
}

std::string hunt_timing_csv(const HuntLog& log) {
  std::string out = "iter,wallclock_s\n";
  for (const auto& r : log.records) out += std::to_string(r.iter) + ',' + real(r.wallclock_s) + '\n';
  return out;
}

}  // namespace dlmath::cem
