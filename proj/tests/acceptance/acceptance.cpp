// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dlmath/cem/search.hpp"
#include "dlmath/cli/commands.hpp"
#include "dlmath/experiments/experiment.hpp"
#include "dlmath/graph/invariants.hpp"
#include "dlmath/nn/loss.hpp"
#include "dlmath/nn/mlp.hpp"
#include "finite_diff.hpp"
#include "jacobi.hpp"
#include "matching_dp.hpp"
#include "random_graphs.hpp"

using namespace dlmath;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.4f", x);
  return s;
}

// Gradient check on 100 random networks with dims <= (8, 8, 8, 4).
Outcome gradient_check() {
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<std::size_t> hidden(1, 8), out(1, 4);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0;
  std::size_t coords = 0;
  for (int net = 0; net < 100; ++net) {
    const std::vector<std::size_t> dims{hidden(rng), hidden(rng), hidden(rng), out(rng)};
    std::vector<nn::AffineLayer> layers;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
      nn::AffineLayer l{nn::Mat(dims[k + 1], dims[k]), nn::Vec(dims[k + 1])};
      for (Eigen::Index i = 0; i < l.weights.size(); ++i) l.weights.data()[i] = u(rng);
      for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias[i] = u(rng);
      layers.push_back(std::move(l));
    }
    const nn::Mlp m(std::move(layers));
    nn::Mat x(5, static_cast<Eigen::Index>(dims[0]));
    nn::ForwardCache cache;
    for (;;) {
      for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
      nn::forward(m, x, &cache);
      bool kink = false;
      for (std::size_t k = 0; k + 1 < cache.pre.size(); ++k) kink |= (cache.pre[k].array().abs() < 1e-3).any();
      if (!kink) break;
    }
    nn::Mat t(5, static_cast<Eigen::Index>(dims.back()));
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = u(rng);
    const auto analytic = nn::backward(m, cache, nn::loss_mse(nn::forward(m, x), t).grad);
    const auto numeric =
        oracle::numeric_param_grad(m, [&](const nn::Mlp& w) { return nn::loss_mse(nn::forward(w, x), t).value; });
    for (std::size_t k = 0; k < m.num_layers(); ++k) {
      for (Eigen::Index i = 0; i < analytic.weights[k].size(); ++i, ++coords)
        worst = std::max(worst, oracle::rel_error(analytic.weights[k].data()[i], numeric.weights[k].data()[i]));
      for (Eigen::Index i = 0; i < analytic.bias[k].size(); ++i, ++coords)
        worst = std::max(worst, oracle::rel_error(analytic.bias[k][i], numeric.bias[k][i]));
    }
  }
  return {worst < 1e-4, fmt("100 nets, %zu coordinates, max rel error %.3g (< 1e-4)", coords, worst)};
}

Outcome matching_check() {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<std::size_t> size(2, 9);
  std::uniform_real_distribution<double> dens(0.0, 1.0);
  int mismatches = 0;
  for (int t = 0; t < 20000; ++t) {
    const auto g = oracle::random_graph(size(rng), dens(rng), rng);
    const auto mu = graph::matching_number(g);
    if (mu != graph::matching_number_bruteforce(g) || mu != oracle::dp_matching_number(g)) ++mismatches;
  }
  return {mismatches == 0, fmt("20000 graphs n in 2..9, %d mismatches", mismatches)};
}

Outcome eigen_check() {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::uniform_real_distribution<double> dens(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 5000; ++t) {
    const auto g = oracle::random_graph(size(rng), dens(rng), rng);
    worst = std::max(worst, std::abs(graph::lambda_max(g) - oracle::oracle_lambda_max(g)));
  }
  double worst_closed = 0.0;
  for (std::size_t n = 2; n <= 30; ++n) {
    worst_closed = std::max(worst_closed, std::abs(graph::lambda_max(graph::Graph::complete(n)) - double(n - 1)));
    worst_closed =
        std::max(worst_closed, std::abs(graph::lambda_max(graph::Graph::star(n)) - std::sqrt(double(n - 1))));
  }
  return {worst < 1e-8 && worst_closed < 1e-9,
          fmt("5000 graphs max |diff| %.3g (< 1e-8); K_n, star_n for n 2..30 max err %.3g (< 1e-9)", worst,
              worst_closed)};
}

Outcome star_check() {
  double worst = 0.0;
  for (std::size_t n = 3; n <= 30; ++n)
    worst = std::max(worst, std::abs(graph::conjecture_score(graph::Graph::star(n)).value));
  return {worst < 1e-9, fmt("n 3..30 max |score| %.3g (< 1e-9)", worst)};
}

Outcome parity_check() {
  int ok = 0;
  std::vector<double> val_half, train_tenth, val_tenth;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto spec = experiments::default_spec(experiments::Task::kParity);
    spec.seed = seed;
    spec.train.seed = seed;
    spec.train_fraction = 0.5;
    const auto half = experiments::run_experiment(spec);
    spec.train_fraction = 0.1;
    const auto tenth = experiments::run_experiment(spec);
    val_half.push_back(half.validation.exact_acc);
    train_tenth.push_back(tenth.train.exact_acc);
    val_tenth.push_back(tenth.validation.exact_acc);
    if (half.validation.exact_acc >= 0.95 && tenth.train.exact_acc >= 0.95 && tenth.validation.exact_acc <= 0.65)
      ++ok;
  }
  return {ok >= 4, fmt("%d/5 seeds (need 4); 50%%: val [%s] (>= 0.95); 10%%: train [%s] (>= 0.95), val [%s] "
                       "(<= 0.65)",
                       ok, join(val_half).c_str(), join(train_tenth).c_str(), join(val_tenth).c_str())};
}

Outcome descent_check() {
  std::vector<double> right, left, right_pm, left_pm;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto run = [&](experiments::Task task, experiments::Representation rep) {
      auto spec = experiments::default_spec(task);
      spec.representation = rep;
      spec.seed = seed;
      spec.train.seed = seed;
      return experiments::run_experiment(spec).validation.exact_acc;
    };
    using experiments::Representation;
    using experiments::Task;
    right.push_back(run(Task::kDescentRight, Representation::kOneLine));
    left.push_back(run(Task::kDescentLeft, Representation::kOneLine));
    right_pm.push_back(run(Task::kDescentRight, Representation::kPermMatrix));
    left_pm.push_back(run(Task::kDescentLeft, Representation::kPermMatrix));
  }
  const double r = median(right), l = median(left), rp = median(right_pm), lp = median(left_pm);
  const bool pass = r >= 0.95 && l <= 0.05 && std::abs(rp - lp) <= 0.05 && r - l >= 0.80;
  return {pass, fmt("medians: one-line right %.4f (>= 0.95), left %.4f (<= 0.05), gap %.4f (>= 0.80); "
                    "perm-matrix right %.4f, left %.4f, |diff| %.4f (<= 0.05); per seed right [%s] left [%s] "
                    "pm-right [%s] pm-left [%s]",
                    r, l, r - l, rp, lp, std::abs(rp - lp), join(right).c_str(), join(left).c_str(),
                    join(right_pm).c_str(), join(left_pm).c_str())};
}

Outcome cem_check() {
  cem::CemConfig cfg;
  cfg.n = 7;
  cfg.max_iters = 30;
  cfg.seed = 1;
  cem::ConjectureObjective obj(cfg.disconnect_penalty);
  const auto log = cem::hunt(cfg, obj);
  bool monotone = log.records.size() == 30;
  for (std::size_t i = 1; i < log.records.size(); ++i)
    monotone &= log.records[i].best_so_far <= log.records[i - 1].best_so_far;
  const double first = log.records.front().elite_mean, last = log.records.back().elite_mean;
  return {monotone && last < first,
          fmt("best_so_far non-increasing: %s; elite mean iter 1 %.4f, iter 30 %.4f; best %.3g",
              monotone ? "yes" : "no", first, last, log.best_score)};
}

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
  return cli::run_cli(static_cast<int>(argv.size()), argv.data());
}

Outcome determinism_check() {
  const auto dir = fs::temp_directory_path() / "dlmath_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "hunt.json") << R"({"n": 8, "max_iters": 10, "checkpoint_interval": 5, "seed": 3})";
  std::ofstream(dir / "descent.json")
      << R"({"task": "descent-right", "n": 12, "num_train": 2000, "num_val": 500, "hidden": [64, 32], "train": {"max_epochs": 3}})";
  std::ofstream(dir / "parity.json") << R"({"task": "parity", "train": {"max_epochs": 40}, "seed": 2})";

  std::vector<std::string> problems;
  auto compare = [&](const std::string& a, const std::string& b, std::initializer_list<const char*> files) {
    for (const char* f : files)
      if (slurp(dir / a / f) != slurp(dir / b / f) || slurp(dir / a / f).empty())
        problems.push_back(a + "/" + f + " vs " + b + "/" + f);
  };
  cli({"hunt", "--config", (dir / "hunt.json").string(), "--out", (dir / "h1").string()});
  cli({"hunt", "--config", (dir / "h1" / "run_manifest.json").string(), "--out", (dir / "h2").string()});
  cli({"hunt", "--config", (dir / "hunt.json").string(), "--out", (dir / "h4").string(), "--workers", "4"});
  compare("h1", "h2", {"hunt_log.csv", "checkpoint.json", "best_graph.json", "best_graph.txt", "summary.json",
                       "run_manifest.json"});
  compare("h1", "h4", {"hunt_log.csv", "checkpoint.json", "best_graph.json", "summary.json"});
  for (const char* cmd : {"descent", "parity"}) {
    const std::string a = std::string(cmd) + "1", b = std::string(cmd) + "2";
    cli({cmd, "--config", (dir / (std::string(cmd) + ".json")).string(), "--out", (dir / a).string()});
    cli({cmd, "--config", (dir / a / "run_manifest.json").string(), "--out", (dir / b).string()});
    compare(a, b, {"metrics.csv", "summary.json", "model.json", "run_manifest.json"});
  }
  std::string detail = "manifest replays of hunt/descent/parity byte-identical, hunt workers 1 vs 4 identical";
  if (!problems.empty()) {
    detail = "differences:";
    for (const auto& p : problems) detail += " " + p;
  }
  return {problems.empty(), detail};
}

Outcome extended_check(double budget_hours, std::size_t workers) {
  cem::CemConfig cfg;
  cfg.n = 19;
  cfg.seed = 1;
  cfg.max_iters = std::numeric_limits<std::size_t>::max();
  cem::ConjectureObjective obj(cfg.disconnect_penalty);
  const auto start = std::chrono::steady_clock::now();
  const auto budget = std::chrono::duration<double>(budget_hours * 3600.0);
  cem::HuntOptions opts;
  opts.workers = workers;
  opts.should_stop = [&] { return std::chrono::steady_clock::now() - start > budget; };
  opts.on_iteration = [](const cem::IterationRecord& r) {
    if (r.iter % 50 == 0) std::fprintf(stderr, "  n=19 iter %zu best %.6f\n", r.iter, r.best_so_far);
  };
  const auto log = cem::hunt(cfg, obj, opts);
  bool monotone = true;
  for (std::size_t i = 1; i < log.records.size(); ++i)
    monotone &= log.records[i].best_so_far <= log.records[i - 1].best_so_far;
  if (log.found) {
    const auto& g = *log.best_graph;
    const double lambda = oracle::oracle_lambda_max(g);
    const double value = lambda + double(graph::matching_number(g)) - std::sqrt(double(g.n() - 1)) - 1;
    const bool ok = graph::is_connected(g) && value < -1e-6;
    return {ok, fmt("found after %zu iterations: score %.9f, oracle re-check %.9f, graph %s", log.records.size(),
                    log.best_score, value, g.bitstring().c_str())};
  }
  const double first = log.records.empty() ? NAN : log.records.front().best_so_far;
  return {false, fmt("budget exhausted after %zu iterations; best %.6f (first %.6f), monotone %s, reached <= 0.05: %s",
                     log.records.size(), log.best_score, first, monotone ? "yes" : "no",
                     log.best_score <= 0.05 ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  bool extended = false;
  double budget_hours = 24.0;
  std::size_t workers = 1;
  std::vector<std::string> only;
  app.add_flag("--extended", extended, "Also run the n=19 counterexample hunt");
  app.add_option("--budget-hours", budget_hours, "Wallclock budget for the n=19 hunt")->capture_default_str();
  app.add_option("--workers", workers, "Sampling threads for the n=19 hunt")->capture_default_str();
  app.add_option("--only", only, "Run only the named criteria");
  CLI11_PARSE(app, argc, argv);

  std::vector<Criterion> criteria{
      {"gradient", 10, gradient_check},
      {"matching", 60, matching_check},
      {"eigenvalue", 60, eigen_check},
      {"star-equality", 60, star_check},
      {"parity", 300, parity_check},
      {"descent", 900, descent_check},
      {"cem-small", 300, cem_check},
      {"determinism", 300, determinism_check},
  };
  if (extended)
    criteria.push_back({"counterexample-n19", budget_hours * 3600.0 + 600.0,
                        [&] { return extended_check(budget_hours, workers); }});

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s %s: %s; %.1f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(),
                secs, c.budget_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
