#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace dlmath::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBudgetExhausted = 2;

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> resume;
  std::filesystem::path out = ".";
  std::size_t workers = 1;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

/// Writes hunt_log.csv, timing.csv, checkpoint.json, best_graph.json,
/// best_graph.txt, summary.json. 0 when a verified counterexample was found,
/// 2 when max_iters ran out.
int cmd_hunt(const RunOptions& opts);
/// Writes metrics.csv, summary.json, model.json, timing.json.
int cmd_parity(const RunOptions& opts);
int cmd_descent(const RunOptions& opts);
/// Config {checkpoint, dataset, position}; writes saliency.csv.
int cmd_saliency(const RunOptions& opts);

/// Full command line; errors go to stderr and return 1.
int run_cli(int argc, const char* const* argv);

}  // namespace dlmath::cli
