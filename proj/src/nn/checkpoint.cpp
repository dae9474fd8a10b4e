#include "dlmath/nn/checkpoint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dlmath::nn {

using nlohmann::json;

namespace {

json matrix_to_json(const Mat& m) {
  return json(std::vector<double>(m.data(), m.data() + m.size()));
}

json vector_to_json(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

std::vector<double> reals(const json& j, const char* what) {
  if (!j.is_array()) throw CheckpointError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw CheckpointError(std::string(what) + " must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

json gradients_to_json(const Gradients& g) {
  json layers = json::array();
  for (std::size_t k = 0; k < g.weights.size(); ++k)
    layers.push_back({{"weights", matrix_to_json(g.weights[k])}, {"bias", vector_to_json(g.bias[k])}});
  return layers;
}

Gradients gradients_from_json(const json& j, const Mlp& like) {
  if (!j.is_array() || j.size() != like.num_layers())
    throw CheckpointError("optimizer moments do not match network depth");
  Gradients g = Gradients::zeros_like(like);
  for (std::size_t k = 0; k < like.num_layers(); ++k) {
    const auto w = reals(j[k].at("weights"), "moment weights");
    const auto b = reals(j[k].at("bias"), "moment bias");
    if (w.size() != static_cast<std::size_t>(g.weights[k].size()) ||
        b.size() != static_cast<std::size_t>(g.bias[k].size()))
      throw CheckpointError("optimizer moment shape mismatch at layer " + std::to_string(k));
    std::copy(w.begin(), w.end(), g.weights[k].data());
    std::copy(b.begin(), b.end(), g.bias[k].data());
  }
  return g;
}

void write_value(std::ostringstream& os, const json& j, int indent);

void write_newline(std::ostringstream& os, int indent) {
  os << '\n' << std::string(static_cast<std::size_t>(indent) * 2, ' ');
}

bool is_scalar(const json& j) { return !j.is_object() && !j.is_array(); }

void write_value(std::ostringstream& os, const json& j, int indent) {
  switch (j.type()) {
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw CheckpointError("cannot serialize non-finite real");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ',';
        first = false;
        write_newline(os, indent + 1);
        os << json(key).dump() << ": ";
        write_value(os, value, indent + 1);
      }
      write_newline(os, indent);
      os << '}';
      return;
    }
    case json::value_t::array: {
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      os << '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) os << (flat ? ", " : ",");
        first = false;
        if (!flat) write_newline(os, indent + 1);
        write_value(os, value, indent + 1);
      }
      if (!flat && !j.empty()) write_newline(os, indent);
      os << ']';
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_exact(const json& j) {
  std::ostringstream os;
  write_value(os, j, 0);
  os << '\n';
  return os.str();
}

json checkpoint_to_json(const Checkpoint& ckpt) {
  json j;
  j["schema_version"] = kCheckpointSchemaVersion;
  j["layer_dims"] = ckpt.model.layer_dims();
  json layers = json::array();
  for (const auto& l : ckpt.model.layers())
    layers.push_back({{"weights", matrix_to_json(l.weights)}, {"bias", vector_to_json(l.bias)}});
  j["layers"] = std::move(layers);
  if (ckpt.optimizer_state) {
    const auto& s = *ckpt.optimizer_state;
    json st{{"step", s.step}};
    if (!s.first_moment.weights.empty()) {
      st["first_moment"] = gradients_to_json(s.first_moment);
      st["second_moment"] = gradients_to_json(s.second_moment);
    }
    j["optimizer_state"] = std::move(st);
  }
  if (ckpt.rng_state) j["rng_state"] = *ckpt.rng_state;
  return j;
}

Checkpoint checkpoint_from_json(const json& j) {
  try {
    if (!j.is_object()) throw CheckpointError("checkpoint must be a JSON object");
    if (j.at("schema_version").get<int>() != kCheckpointSchemaVersion)
      throw CheckpointError("unsupported checkpoint schema_version");
    const auto dims = j.at("layer_dims").get<std::vector<std::size_t>>();
    const auto& jl = j.at("layers");
    if (dims.size() < 2 || !jl.is_array() || jl.size() + 1 != dims.size())
      throw CheckpointError("layer_dims and layers disagree");
    std::vector<AffineLayer> layers;
    for (std::size_t k = 0; k < jl.size(); ++k) {
      const auto w = reals(jl[k].at("weights"), "weights");
      const auto b = reals(jl[k].at("bias"), "bias");
      const auto rows = static_cast<Eigen::Index>(dims[k + 1]);
      const auto cols = static_cast<Eigen::Index>(dims[k]);
      if (w.size() != dims[k] * dims[k + 1] || b.size() != dims[k + 1])
        throw CheckpointError("layer " + std::to_string(k) + " has the wrong number of entries");
      AffineLayer l{Mat(rows, cols), Vec(rows)};
      std::copy(w.begin(), w.end(), l.weights.data());
      std::copy(b.begin(), b.end(), l.bias.data());
      layers.push_back(std::move(l));
    }
    Checkpoint ckpt{Mlp(std::move(layers)), std::nullopt, std::nullopt};
    if (j.contains("optimizer_state")) {
      const auto& st = j["optimizer_state"];
      OptimizerState s;
      s.step = st.at("step").get<std::uint64_t>();
      if (st.contains("first_moment")) {
        s.first_moment = gradients_from_json(st["first_moment"], ckpt.model);
        s.second_moment = gradients_from_json(st.at("second_moment"), ckpt.model);
      }
      ckpt.optimizer_state = std::move(s);
    }
    if (j.contains("rng_state")) ckpt.rng_state = j["rng_state"].get<std::string>();
    return ckpt;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ShapeError& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  out << dump_exact(checkpoint_to_json(ckpt));
  if (!out) throw CheckpointError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CheckpointError("checkpoint " + path.string() + " is not valid JSON: " + e.what());
  }
  return checkpoint_from_json(j);
}

json train_config_to_json(const TrainConfig& cfg) {
  return {{"learning_rate", cfg.learning_rate}, {"batch_size", cfg.batch_size},
          {"optimizer", std::string(to_string(cfg.optimizer))}, {"beta1", cfg.beta1},
          {"beta2", cfg.beta2}, {"epsilon", cfg.epsilon}, {"max_epochs", cfg.max_epochs},
          {"seed", cfg.seed}, {"schedule", std::string(to_string(cfg.schedule))}};
}

TrainConfig train_config_from_json(const json& j, TrainConfig base) {
  if (!j.is_object()) throw std::invalid_argument("train config must be a JSON object");
  TrainConfig cfg = base;
  for (const auto& [key, value] : j.items()) {
    if (key == "learning_rate") cfg.learning_rate = value.get<double>();
    else if (key == "batch_size") cfg.batch_size = value.get<std::size_t>();
    else if (key == "optimizer") cfg.optimizer = optimizer_from_string(value.get<std::string>());
    else if (key == "beta1") cfg.beta1 = value.get<double>();
    else if (key == "beta2") cfg.beta2 = value.get<double>();
    else if (key == "epsilon") cfg.epsilon = value.get<double>();
    else if (key == "max_epochs") cfg.max_epochs = value.get<std::size_t>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "schedule") cfg.schedule = schedule_from_string(value.get<std::string>());
    else throw std::invalid_argument("unknown train config key '" + key + "'");
  }
  return cfg;
}

std::string rng_to_string(const std::mt19937_64& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

std::mt19937_64 rng_from_string(const std::string& state) {
  std::istringstream is(state);
  std::mt19937_64 rng;
  is >> rng;
  if (!is) throw CheckpointError("malformed rng_state");
  return rng;
}

}  // namespace dlmath::nn
