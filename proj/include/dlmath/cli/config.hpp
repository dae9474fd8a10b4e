#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace dlmath::cli {

inline constexpr const char* kArtifactName = "dlmath";
inline constexpr const char* kArtifactVersion = "0.1.0";

/// Failure with a message meant for the user; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// A config file is either the bare command config or a run manifest written
/// by an earlier run. Manifests are unwrapped to their "config" object and
/// must name the same command.
struct LoadedConfig {
  nlohmann::json config;
  std::optional<std::string> manifest_resume;
  std::filesystem::path base_dir;
};
LoadedConfig load_config(const std::filesystem::path& path, const std::string& command);

/// {artifact, version, command, seed, workers, resume, config}
nlohmann::json make_manifest(const std::string& command, const nlohmann::json& resolved_config,
                             std::uint64_t seed, std::size_t workers,
                             const std::optional<std::string>& resume);

}  // namespace dlmath::cli
