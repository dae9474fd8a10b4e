#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "dlmath/cli/commands.hpp"
#include "dlmath/nn/checkpoint.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using dlmath::cli::run_cli;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "dlmath_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dlmath");
  args.push_back("--quiet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("hunt exit codes and outputs") {
  const auto dir = scratch_dir("hunt");
  write(dir / "planted.json", R"({"n": 4, "objective": "edge_count", "target_score": 1, "seed": 2})");
  CHECK(cli({"hunt", "--config", (dir / "planted.json").string(), "--out", (dir / "planted").string()}) == 0);
  for (const char* f : {"hunt_log.csv", "timing.csv", "checkpoint.json", "best_graph.json", "best_graph.txt",
                        "summary.json", "run_manifest.json"})
    CHECK_MESSAGE(fs::exists(dir / "planted" / f), f);
  CHECK(slurp(dir / "planted" / "best_graph.txt") == "000000\n");
  CHECK(json::parse(slurp(dir / "planted" / "best_graph.json")) == json{{"n", 4}, {"edges", json::array()}});
  CHECK(json::parse(slurp(dir / "planted" / "summary.json"))["found"] == true);

  write(dir / "short.json", R"({"n": 5, "episodes_per_iter": 100, "policy_dims": [8], "max_iters": 3, "seed": 1})");
  CHECK(cli({"hunt", "--config", (dir / "short.json").string(), "--out", (dir / "short").string()}) == 2);
  const auto log = slurp(dir / "short" / "hunt_log.csv");
  CHECK(log.rfind("iter,best_so_far,iter_best,elite_mean,policy_loss\n", 0) == 0);
  CHECK(std::count(log.begin(), log.end(), '\n') == 4);

  CHECK(cli({"hunt", "--config", (dir / "missing.json").string(), "--out", (dir / "x").string()}) == 1);
  write(dir / "broken.json", "{ n: 5 ");
  CHECK(cli({"hunt", "--config", (dir / "broken.json").string(), "--out", (dir / "x").string()}) == 1);
  write(dir / "unknown.json", R"({"n": 5, "episodes": 10})");
  CHECK(cli({"hunt", "--config", (dir / "unknown.json").string(), "--out", (dir / "x").string()}) == 1);
  CHECK(cli({"hunt"}) == 1);
  CHECK(cli({"fly", "--config", "x"}) == 1);
}

TEST_CASE("hunt determinism: manifest replay, workers, resume") {
  const auto dir = scratch_dir("hunt_det");
  write(dir / "cfg.json",
        R"({"n": 6, "episodes_per_iter": 150, "policy_dims": [16, 8], "max_iters": 6, "checkpoint_interval": 3, "seed": 9})");
  CHECK(cli({"hunt", "--config", (dir / "cfg.json").string(), "--out", (dir / "a").string()}) == 2);
  CHECK(cli({"hunt", "--config", (dir / "a" / "run_manifest.json").string(), "--out", (dir / "b").string()}) == 2);
  CHECK(cli({"hunt", "--config", (dir / "cfg.json").string(), "--out", (dir / "c").string(), "--workers", "4"}) == 2);
  for (const char* f : {"hunt_log.csv", "checkpoint.json", "best_graph.json", "best_graph.txt", "summary.json"}) {
    CHECK_MESSAGE(slurp(dir / "a" / f) == slurp(dir / "b" / f), f);
    CHECK_MESSAGE(slurp(dir / "a" / f) == slurp(dir / "c" / f), f);
  }
  CHECK(slurp(dir / "a" / "run_manifest.json") == slurp(dir / "b" / "run_manifest.json"));

  // Seed override changes the trajectory and is recorded.
  CHECK(cli({"hunt", "--config", (dir / "cfg.json").string(), "--out", (dir / "s").string(), "--seed", "10"}) == 2);
  CHECK(slurp(dir / "s" / "hunt_log.csv") != slurp(dir / "a" / "hunt_log.csv"));
  CHECK(json::parse(slurp(dir / "s" / "run_manifest.json"))["config"]["seed"] == 10);

  // Three iterations, then resume to six.
  write(dir / "half.json",
        R"({"n": 6, "episodes_per_iter": 150, "policy_dims": [16, 8], "max_iters": 3, "checkpoint_interval": 3, "seed": 9})");
  CHECK(cli({"hunt", "--config", (dir / "half.json").string(), "--out", (dir / "h").string()}) == 2);
  CHECK(cli({"hunt", "--config", (dir / "cfg.json").string(), "--out", (dir / "r").string(), "--resume",
             (dir / "h" / "checkpoint.json").string()}) == 2);
  CHECK(slurp(dir / "r" / "hunt_log.csv") == slurp(dir / "a" / "hunt_log.csv"));
  CHECK(slurp(dir / "r" / "checkpoint.json") == slurp(dir / "a" / "checkpoint.json"));
  // The resume path travels with the manifest.
  CHECK(cli({"hunt", "--config", (dir / "r" / "run_manifest.json").string(), "--out", (dir / "r2").string()}) == 2);
  CHECK(slurp(dir / "r2" / "hunt_log.csv") == slurp(dir / "a" / "hunt_log.csv"));

  write(dir / "bad_ckpt.json", R"({"schema_version": 1})");
  CHECK(cli({"hunt", "--config", (dir / "cfg.json").string(), "--out", (dir / "x").string(), "--resume",
             (dir / "bad_ckpt.json").string()}) == 1);
}

TEST_CASE("parity and descent commands") {
  const auto dir = scratch_dir("experiments");
  write(dir / "parity.json", R"({"task": "parity", "train_fraction": 0.5, "train": {"max_epochs": 5}})");
  CHECK(cli({"parity", "--config", (dir / "parity.json").string(), "--out", (dir / "p").string()}) == 0);
  const auto summary = json::parse(slurp(dir / "p" / "summary.json"));
  CHECK(summary.contains("validation_accuracy"));
  CHECK(summary["validation"].contains("per_position_acc"));
  CHECK(fs::exists(dir / "p" / "model.json"));
  CHECK(fs::exists(dir / "p" / "timing.json"));
  CHECK(cli({"parity", "--config", (dir / "p" / "run_manifest.json").string(), "--out", (dir / "p2").string()}) == 0);
  for (const char* f : {"metrics.csv", "summary.json", "model.json", "run_manifest.json"})
    CHECK_MESSAGE(slurp(dir / "p" / f) == slurp(dir / "p2" / f), f);

  write(dir / "descent.json",
        R"({"task": "descent-right", "n": 35, "num_train": 400, "num_val": 100, "hidden": [32], "train": {"max_epochs": 2}})");
  CHECK(cli({"descent", "--config", (dir / "descent.json").string(), "--out", (dir / "d").string()}) == 0);
  const auto csv = slurp(dir / "d" / "metrics.csv");
  CHECK(csv.rfind("epoch,train_loss,train_acc,val_loss,val_per_position_acc,val_exact_acc\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(cli({"descent", "--config", (dir / "descent.json").string(), "--out", (dir / "d2").string()}) == 0);
  CHECK(slurp(dir / "d" / "metrics.csv") == slurp(dir / "d2" / "metrics.csv"));

  CHECK(cli({"parity", "--config", (dir / "descent.json").string(), "--out", (dir / "x").string()}) == 1);
  CHECK(cli({"descent", "--config", (dir / "p" / "run_manifest.json").string(), "--out", (dir / "x").string()}) == 1);
  write(dir / "bad.json", R"({"task": "descent-right", "representation": "raw-bits"})");
  CHECK(cli({"descent", "--config", (dir / "bad.json").string(), "--out", (dir / "x").string()}) == 1);
  CHECK(cli({"parity", "--config", (dir / "parity.json").string(), "--resume", "x.json"}) == 1);
}

TEST_CASE("saliency command") {
  const auto dir = scratch_dir("saliency");
  const std::size_t n = 7;
  dlmath::nn::Mat w = dlmath::nn::Mat::Zero(n - 1, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1;
    w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = -1;
  }
  dlmath::nn::Mlp gamma({dlmath::nn::AffineLayer{w, dlmath::nn::Vec::Zero(n - 1)}});
  dlmath::nn::save_checkpoint(dir / "gamma.json", {gamma, std::nullopt, std::nullopt});

  const json dataset{{"task", "descent-right"}, {"n", n}, {"num_train", 100}, {"num_val", 50}};
  write(dir / "s.json", json{{"checkpoint", "gamma.json"}, {"dataset", dataset}, {"position", 3}}.dump());
  CHECK(cli({"saliency", "--config", (dir / "s.json").string(), "--out", (dir / "out").string()}) == 0);
  std::istringstream csv(slurp(dir / "out" / "saliency.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "coordinate,mean_abs_grad");
  std::vector<std::string> rows;
  while (std::getline(csv, line)) rows.push_back(line);
  CHECK(rows.size() == n);
  REQUIRE(rows.size() >= 2);
  const auto coord = [](const std::string& r) { return std::stoul(r.substr(0, r.find(','))); };
  CHECK(std::set<unsigned long>{coord(rows[0]), coord(rows[1])} == std::set<unsigned long>{3, 4});

  write(dir / "garbage.json", "[1, 2");
  write(dir / "s_bad.json", json{{"checkpoint", "garbage.json"}, {"dataset", dataset}, {"position", 0}}.dump());
  CHECK(cli({"saliency", "--config", (dir / "s_bad.json").string(), "--out", (dir / "x").string()}) == 1);
  const json wrong{{"task", "descent-right"}, {"n", n + 1}, {"num_train", 100}, {"num_val", 50}};
  write(dir / "s_dim.json", json{{"checkpoint", "gamma.json"}, {"dataset", wrong}, {"position", 0}}.dump());
  CHECK(cli({"saliency", "--config", (dir / "s_dim.json").string(), "--out", (dir / "x").string()}) == 1);
  write(dir / "s_pos.json", json{{"checkpoint", "gamma.json"}, {"dataset", dataset}, {"position", n}}.dump());
  CHECK(cli({"saliency", "--config", (dir / "s_pos.json").string(), "--out", (dir / "x").string()}) == 1);
}
