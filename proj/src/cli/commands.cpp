#include "dlmath/cli/commands.hpp"

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "dlmath/cem/search.hpp"
#include "dlmath/cli/config.hpp"
#include "dlmath/experiments/experiment.hpp"
#include "dlmath/nn/checkpoint.hpp"

namespace dlmath::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& p, const fs::path& base) { return p.is_absolute() ? p : base / p; }

void prepare_out(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw UsageError("cannot create output directory " + out.string());
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, nn::dump_exact(j) + "\n"); }

json metrics_json(const nn::EvalMetrics& m) {
  return {{"loss", m.loss}, {"per_position_acc", m.per_position_acc}, {"exact_acc", m.exact_acc}};
}

int run_experiment_command(const RunOptions& opts, const std::string& command) {
  if (opts.resume) throw UsageError("--resume applies to hunt only");
  const auto loaded = load_config(opts.config, command);
  auto spec = experiments::experiment_spec_from_json(loaded.config);
  const bool parity_task = spec.task == experiments::Task::kParity;
  if (parity_task != (command == "parity"))
    throw UsageError("task '" + std::string(to_string(spec.task)) + "' does not belong to the " + command +
                     " command");
  if (opts.seed) {
    spec.seed = *opts.seed;
    spec.train.seed = *opts.seed;
  }
  spec.validate();
  prepare_out(opts.out);
  const auto resolved = experiments::to_json(spec);
  write_json(opts.out / "run_manifest.json", make_manifest(command, resolved, spec.seed, 1, std::nullopt));

  auto on_epoch = [&](const experiments::EpochRecord& r) {
    if (opts.quiet) return;
    std::fprintf(stderr, "epoch %zu train_loss %.6g train_acc %.4f val_exact_acc %.4f\n", r.epoch, r.train_loss,
                 r.train_acc, r.val_exact_acc);
  };
  const auto result = experiments::run_experiment(spec, on_epoch);

  write_text_file(opts.out / "metrics.csv", experiments::epochs_csv(result.epochs));
  json summary{{"task", std::string(to_string(spec.task))},
               {"epochs", result.epochs.size()},
               {"validation_accuracy", result.validation.exact_acc},
               {"validation", metrics_json(result.validation)},
               {"train", metrics_json(result.train)}};
  write_json(opts.out / "summary.json", summary);
  nn::save_checkpoint(opts.out / "model.json", nn::Checkpoint{result.model, std::nullopt, std::nullopt});
  write_json(opts.out / "timing.json", json{{"wallclock_s", result.wallclock_s}});
  return kExitOk;
}

}  // namespace

int cmd_hunt(const RunOptions& opts) {
  const auto loaded = load_config(opts.config, "hunt");
  auto cfg = cem::cem_config_from_json(loaded.config);
  if (opts.seed) cfg.seed = *opts.seed;
  cfg.validate();
  if (opts.workers == 0) throw UsageError("--workers must be at least 1");
  const auto objective = cem::make_objective(cfg.objective, cfg.disconnect_penalty);

  std::optional<std::string> resume_path;
  if (opts.resume) resume_path = fs::absolute(*opts.resume).string();
  else if (loaded.manifest_resume) resume_path = resolve(*loaded.manifest_resume, loaded.base_dir).string();
  std::optional<cem::HuntState> resume;
  if (resume_path) resume = cem::hunt_state_from_json(read_json_file(*resume_path));

  prepare_out(opts.out);
  write_json(opts.out / "run_manifest.json", make_manifest("hunt", cem::to_json(cfg), cfg.seed, opts.workers, resume_path));

  cem::HuntOptions hopts;
  hopts.workers = opts.workers;
  hopts.on_checkpoint = [&](const cem::HuntState& s) {
    write_json(opts.out / "checkpoint.json", cem::hunt_state_to_json(s));
    write_text_file(opts.out / "hunt_log.csv", cem::hunt_log_csv(s.log));
  };
  hopts.on_iteration = [&](const cem::IterationRecord& r) {
    if (opts.quiet) return;
    std::fprintf(stderr, "iter %zu best %.10g iter_best %.10g elite_mean %.6g loss %.6g\n", r.iter, r.best_so_far,
                 r.iter_best, r.elite_mean, r.policy_loss);
  };
  const auto log = cem::hunt(cfg, *objective, hopts, std::move(resume));

  write_text_file(opts.out / "hunt_log.csv", cem::hunt_log_csv(log));
  write_text_file(opts.out / "timing.csv", cem::hunt_timing_csv(log));
  if (log.best_graph) {
    write_json(opts.out / "best_graph.json", graph::graph_to_json(*log.best_graph));
    write_text_file(opts.out / "best_graph.txt", log.best_graph->bitstring() + "\n");
  }
  json summary{{"found", log.found},
               {"objective", cfg.objective},
               {"n", cfg.n},
               {"iterations", log.records.size()},
               {"best_score", log.best_graph ? json(log.best_score) : json(nullptr)}};
  if (log.verification)
    summary["verification"] = {{"ok", log.verification->ok},
                               {"recomputed", log.verification->recomputed},
                               {"detail", log.verification->detail}};
  else
    summary["verification"] = nullptr;
  write_json(opts.out / "summary.json", summary);
  return log.found ? kExitOk : kExitBudgetExhausted;
}

int cmd_parity(const RunOptions& opts) { return run_experiment_command(opts, "parity"); }
int cmd_descent(const RunOptions& opts) { return run_experiment_command(opts, "descent"); }

int cmd_saliency(const RunOptions& opts) {
  if (opts.resume) throw UsageError("--resume applies to hunt only");
  const auto loaded = load_config(opts.config, "saliency");
  const auto& c = loaded.config;
  for (const auto& [key, value] : c.items())
    if (key != "checkpoint" && key != "dataset" && key != "position")
      throw UsageError("unknown saliency config key '" + key + "'");
  if (!c.contains("checkpoint") || !c.contains("dataset"))
    throw UsageError("saliency config needs 'checkpoint' and 'dataset'");
  const auto ckpt_path = fs::absolute(resolve(c["checkpoint"].get<std::string>(), loaded.base_dir)).lexically_normal();
  auto spec = experiments::experiment_spec_from_json(c["dataset"]);
  if (opts.seed) spec.seed = *opts.seed;
  const std::size_t position = c.value("position", std::size_t{0});

  const auto ckpt = nn::load_checkpoint(ckpt_path);
  const auto data = experiments::build_dataset(spec);
  if (ckpt.model.input_dim() != data.input_dim())
    throw UsageError("checkpoint input dimension " + std::to_string(ckpt.model.input_dim()) +
                     " does not match dataset dimension " + std::to_string(data.input_dim()));
  if (ckpt.model.output_dim() != static_cast<std::size_t>(data.targets.cols()))
    throw UsageError("checkpoint output dimension " + std::to_string(ckpt.model.output_dim()) +
                     " does not match dataset targets " + std::to_string(data.targets.cols()));

  prepare_out(opts.out);
  json resolved{{"checkpoint", ckpt_path.string()}, {"dataset", experiments::to_json(spec)}, {"position", position}};
  write_json(opts.out / "run_manifest.json", make_manifest("saliency", resolved, spec.seed, 1, std::nullopt));
  const auto report = experiments::saliency_report(ckpt.model, data, position);
  write_text_file(opts.out / "saliency.csv", experiments::saliency_csv(report));
  return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Neural network experiments and counterexample search for graph and permutation problems"};
  app.require_subcommand(1);
  RunOptions opts;
  std::string config, resume, out = ".";
  std::uint64_t seed = 0;

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const RunOptions&);
  };
  const Entry entries[] = {
      {"hunt", "Cross-entropy-method search for a graph scoring below the target", cmd_hunt},
      {"parity", "Train on the parity bit function", cmd_parity},
      {"descent", "Train to predict left or right descent sets", cmd_descent},
      {"saliency", "Mean absolute input gradient of a trained model", cmd_saliency},
  };
  std::vector<CLI::App*> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config, "Config JSON or run_manifest.json")->required();
    sub->add_option("--resume", resume, "Hunt checkpoint to continue from");
    sub->add_option("--out", out, "Output directory")->capture_default_str();
    sub->add_option("--workers", opts.workers, "Sampling threads (hunt)")->capture_default_str()->check(
        CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_flag("-q,--quiet", opts.quiet, "No progress on stderr");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    auto* sub = subs[i];
    if (!sub->parsed()) continue;
    opts.config = config;
    if (sub->count("--resume")) opts.resume = resume;
    opts.out = out;
    if (sub->count("--seed")) opts.seed = seed;
    try {
      return entries[i].run(opts);
    } catch (const std::exception& e) {
      std::cerr << "dlmath " << entries[i].name << ": error: " << e.what() << '\n';
      return kExitError;
    }
  }
  return kExitError;
}

}  // namespace dlmath::cli
