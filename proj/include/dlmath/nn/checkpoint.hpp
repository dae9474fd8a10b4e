#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include <json.hpp>

#include "dlmath/nn/mlp.hpp"
#include "dlmath/nn/optim.hpp"

namespace dlmath::nn {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kCheckpointSchemaVersion = 1;

struct Checkpoint {
  Mlp model;
  std::optional<OptimizerState> optimizer_state;
  std::optional<std::string> rng_state;
};

/// {schema_version, layer_dims, layers: [{weights, bias}], optimizer_state?, rng_state?}
nlohmann::json checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

/// Writes JSON with every real printed to 17 significant digits.
std::string dump_exact(const nlohmann::json& j);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

nlohmann::json train_config_to_json(const TrainConfig& cfg);
/// Keys absent from j keep their value from base; unknown keys throw
/// std::invalid_argument.
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});

std::string rng_to_string(const std::mt19937_64& rng);
std::mt19937_64 rng_from_string(const std::string& state);

}  // namespace dlmath::nn
