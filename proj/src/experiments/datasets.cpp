#include "dlmath/experiments/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace dlmath::experiments {

std::string_view to_string(DescentSide side) { return side == DescentSide::kLeft ? "left" : "right"; }

std::string_view to_string(Representation rep) {
  switch (rep) {
    case Representation::kOneLine: return "one-line";
    case Representation::kPermMatrix: return "perm-matrix";
    case Representation::kRawBits: return "raw-bits";
  }
  return "?";
}

Representation representation_from_string(std::string_view name) {
  if (name == "one-line") return Representation::kOneLine;
  if (name == "perm-matrix") return Representation::kPermMatrix;
  if (name == "raw-bits") return Representation::kRawBits;
  throw std::invalid_argument("unknown representation '" + std::string(name) +
                              "' (expected one-line, perm-matrix or raw-bits)");
}

nn::LabeledDataset gen_parity_dataset(std::size_t m, double train_fraction, std::uint64_t seed) {
  if (m == 0 || m > kMaxParityBits)
    throw std::invalid_argument("parity dataset: m must lie in 1.." + std::to_string(kMaxParityBits));
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("parity dataset: train_fraction must lie in (0, 1)");
  const std::size_t count = std::size_t{1} << m;
  nn::LabeledDataset data;
  data.inputs.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(m));
  data.targets.resize(static_cast<Eigen::Index>(count), 1);
  std::vector<std::uint8_t> bits(m);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      bits[i] = static_cast<std::uint8_t>((k >> i) & 1U);
      data.inputs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = bits[i];
    }
    data.targets(static_cast<Eigen::Index>(k), 0) = parity(bits);
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto num_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(count)));
  data.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(num_train));
  data.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(num_train), order.end());
  std::sort(data.train.begin(), data.train.end());
  std::sort(data.validation.begin(), data.validation.end());
  return data;
}

nn::Vec descent_target(const Permutation& x, DescentSide side) {
  nn::Vec t = nn::Vec::Zero(static_cast<Eigen::Index>(x.size() - 1));
  const auto d = side == DescentSide::kRight ? right_descents(x) : left_descents(x);
  for (int i : d) t[i - 1] = 1.0;
  return t;
}

nn::Vec encode(const Permutation& x, Representation rep) {
  switch (rep) {
    case Representation::kOneLine: return encode_one_line(x);
    case Representation::kPermMatrix: return encode_perm_matrix(x);
    case Representation::kRawBits: break;
  }
  throw std::invalid_argument("raw-bits representation does not apply to permutations");
}

namespace {

// n!, saturating at SIZE_MAX.
std::size_t factorial_capped(std::size_t n) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    if (f > SIZE_MAX / k) return SIZE_MAX;
    f *= k;
  }
  return f;
}

}  // namespace

nn::LabeledDataset gen_descent_dataset(const DescentDataOptions& opts) {
  const std::size_t n = opts.n;
  if (n < 2) throw std::invalid_argument("descent dataset: n must be at least 2");
  if (opts.num_train == 0 || opts.num_val == 0)
    throw std::invalid_argument("descent dataset: split sizes must be positive");
  if (opts.representation == Representation::kRawBits)
    throw std::invalid_argument("descent dataset: raw-bits representation does not apply");
  const std::size_t total = opts.num_train + opts.num_val;
  if (total > factorial_capped(n))
    throw std::invalid_argument("descent dataset: " + std::to_string(total) + " distinct permutations requested but " +
                                std::to_string(n) + "! is smaller");

  std::mt19937_64 rng(opts.seed);
  std::vector<Permutation> perms;
  if (opts.exhaustive) {
    if (total != factorial_capped(n))
      throw std::invalid_argument("descent dataset: exhaustive mode needs num_train + num_val == n!");
    perms = all_permutations(n);
    std::shuffle(perms.begin(), perms.end(), rng);
  } else {
    std::set<std::vector<int>> seen;
    perms.reserve(total);
    while (perms.size() < total) {
      auto p = Permutation::random(n, rng);
      if (seen.insert(p.one_line()).second) perms.push_back(std::move(p));
    }
  }

  const auto dim = opts.representation == Representation::kOneLine ? n : n * n;
  nn::LabeledDataset data;
  data.inputs.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(dim));
  data.targets.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(n - 1));
  for (std::size_t i = 0; i < total; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    data.inputs.row(r) = encode(perms[i], opts.representation).transpose();
    data.targets.row(r) = descent_target(perms[i], opts.side).transpose();
  }
  data.train.resize(opts.num_train);
  std::iota(data.train.begin(), data.train.end(), 0);
  data.validation.resize(opts.num_val);
  std::iota(data.validation.begin(), data.validation.end(), opts.num_train);
  return data;
}

}  // namespace dlmath::experiments
