#include "dlmath/cli/config.hpp"

#include <fstream>

namespace dlmath::cli {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path.string() + " is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + tmp);
    out << text;
    if (!out) throw UsageError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

LoadedConfig load_config(const std::filesystem::path& path, const std::string& command) {
  json j = read_json_file(path);
  if (!j.is_object()) throw UsageError(path.string() + ": config must be a JSON object");
  LoadedConfig loaded;
  loaded.base_dir = std::filesystem::absolute(path).parent_path();
  if (j.contains("artifact") && j.contains("config")) {
    const auto recorded = j.value("command", std::string());
    if (recorded != command)
      throw UsageError(path.string() + ": manifest was written by '" + recorded + "', not '" + command + "'");
    if (j.contains("resume") && j["resume"].is_string()) loaded.manifest_resume = j["resume"].get<std::string>();
    loaded.config = j["config"];
  } else {
    loaded.config = std::move(j);
  }
  return loaded;
}

json make_manifest(const std::string& command, const json& resolved_config, std::uint64_t seed,
                   std::size_t workers, const std::optional<std::string>& resume) {
  json m{{"artifact", kArtifactName},
         {"version", kArtifactVersion},
         {"command", command},
         {"seed", seed},
         {"workers", workers},
         {"config", resolved_config}};
  m["resume"] = resume ? json(*resume) : json(nullptr);
  return m;
}

}  // namespace dlmath::cli
