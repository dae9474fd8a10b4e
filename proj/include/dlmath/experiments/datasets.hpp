#pragma once

#include <cstdint>
#include <string_view>

#include "dlmath/experiments/permutation.hpp"
#include "dlmath/nn/train.hpp"

namespace dlmath::experiments {

enum class DescentSide { kLeft, kRight };
enum class Representation { kOneLine, kPermMatrix, kRawBits };

std::string_view to_string(DescentSide side);
std::string_view to_string(Representation rep);
Representation representation_from_string(std::string_view name);

inline constexpr std::size_t kMaxParityBits = 20;

/// All 2^m points of {0,1}^m labelled by parity. floor(train_fraction * 2^m)
/// points, chosen uniformly with the seed, form the train split; the rest
/// are validation.
nn::LabeledDataset gen_parity_dataset(std::size_t m, double train_fraction, std::uint64_t seed);

struct DescentDataOptions {
  std::size_t n = 35;
  DescentSide side = DescentSide::kRight;
  Representation representation = Representation::kOneLine;
  std::size_t num_train = 20000;
  std::size_t num_val = 5000;
  std::uint64_t seed = 0;
  /// Use every permutation of S_n (lexicographic order, seeded split) instead
  /// of sampling. num_train + num_val must then equal n!.
  bool exhaustive = false;
};

/// Distinct uniformly random permutations, encoded per representation, with
/// the chosen side's descent set as an (n-1)-long 0/1 target.
nn::LabeledDataset gen_descent_dataset(const DescentDataOptions& opts);

/// Target vector marking the descent set of x on the given side.
nn::Vec descent_target(const Permutation& x, DescentSide side);
nn::Vec encode(const Permutation& x, Representation rep);

}  // namespace dlmath::experiments
