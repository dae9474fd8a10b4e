#include "dlmath/experiments/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dlmath::experiments {

Permutation::Permutation(std::vector<int> values) : values_(std::move(values)) {
  const auto n = static_cast<int>(values_.size());
  std::vector<char> seen(values_.size(), 0);
  for (int v : values_) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)])
      throw std::invalid_argument("not a permutation of 1.." + std::to_string(n));
    seen[static_cast<std::size_t>(v - 1)] = 1;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  return Permutation(std::move(v));
}

Permutation Permutation::random(std::size_t n, std::mt19937_64& rng) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(v[i - 1], v[pick(rng)]);
  }
  return Permutation(std::move(v));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) inv[static_cast<std::size_t>(values_[i] - 1)] = static_cast<int>(i + 1);
  return Permutation(std::move(inv));
}

std::vector<int> right_descents(const Permutation& x) {
  std::vector<int> d;
  const auto& v = x.one_line();
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i] > v[i + 1]) d.push_back(static_cast<int>(i + 1));
  return d;
}

std::vector<int> left_descents(const Permutation& x) { return right_descents(x.inverse()); }

std::vector<double> gamma(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("gamma: need at least two coordinates");
  std::vector<double> out(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) out[i] = v[i] - v[i + 1];
  return out;
}

nn::Vec encode_one_line(const Permutation& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  nn::Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = static_cast<double>(x.one_line()[static_cast<std::size_t>(i)]) / static_cast<double>(n);
  return v;
}

nn::Vec encode_perm_matrix(const Permutation& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  nn::Vec v = nn::Vec::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) v[i * n + (x.one_line()[static_cast<std::size_t>(i)] - 1)] = 1.0;
  return v;
}

int parity(std::span<const std::uint8_t> bits) {
  int sum = 0;
  for (auto b : bits) {
    if (b > 1) throw std::invalid_argument("parity: entries must be 0 or 1");
    sum ^= b;
  }
  return sum;
}

std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

}  // namespace dlmath::experiments
