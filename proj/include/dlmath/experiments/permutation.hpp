#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dlmath/nn/mlp.hpp"

namespace dlmath::experiments {

/// A permutation of {1..n} in one-line notation (x(1), ..., x(n)).
class Permutation {
 public:
  /// Throws std::invalid_argument unless values is a bijection of {1..n}.
  explicit Permutation(std::vector<int> values);

  static Permutation identity(std::size_t n);
  /// Uniform random permutation via Fisher-Yates.
  static Permutation random(std::size_t n, std::mt19937_64& rng);

  std::size_t size() const { return values_.size(); }
  /// x(i) for 1 <= i <= n.
  int operator()(std::size_t i) const { return values_.at(i - 1); }
  const std::vector<int>& one_line() const { return values_; }
  Permutation inverse() const;

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> values_;
};

/// R(x) = { i : x(i) > x(i+1) }, ascending, 1-based.
std::vector<int> right_descents(const Permutation& x);
/// L(x) = { i : x^{-1}(i) > x^{-1}(i+1) } = R(x^{-1}).
std::vector<int> left_descents(const Permutation& x);

/// (v1 - v2, v2 - v3, ..., v_{n-1} - v_n). Throws for n < 2.
std::vector<double> gamma(std::span<const double> v);

/// (x(1)/n, ..., x(n)/n).
nn::Vec encode_one_line(const Permutation& x);
/// Row-major flattened permutation matrix, 1 at (i, x(i)).
nn::Vec encode_perm_matrix(const Permutation& x);

/// The 0/1 parity of bits. Throws std::invalid_argument on entries other than 0/1.
int parity(std::span<const std::uint8_t> bits);

/// All n! permutations in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t n);

}  // namespace dlmath::experiments
