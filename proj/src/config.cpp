#include "spikefuse/config.hpp"

#include <cmath>

#include "spikefuse/error.hpp"
#include "spikefuse/rng.hpp"

namespace spikefuse {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

double round9(double x) { return std::round(x * 1e9) / 1e9; }

json to_json(const EncodingConfig& cfg) {
  return json{{"t_steps", cfg.t_steps}, {"dt", cfg.dt}, {"rng_seed", cfg.rng_seed}};
}

json to_json(const LifParams& lif) {
  return json{{"tau_m", lif.tau_m},           {"v_threshold", lif.v_threshold},
              {"v_reset", lif.v_reset},       {"v_rest", lif.v_rest},
              {"input_gain", lif.input_gain}, {"synaptic_gain", lif.synaptic_gain},
              {"floor_factor", lif.floor_factor}};
}

json to_json(const CooperateConfig& cc) {
  return json{{"ss", cc.ss}, {"ts", cc.ts}, {"op", std::string(to_string(cc.op))}};
}

EncodingConfig encoding_from_json(const json& j) {
  EncodingConfig cfg;
  cfg.t_steps = get_or(j, "t_steps", cfg.t_steps);
  cfg.dt = get_or(j, "dt", cfg.dt);
  cfg.rng_seed = get_or(j, "rng_seed", cfg.rng_seed);
  return cfg;
}

LifParams lif_from_json(const json& j) {
  LifParams lif;
  lif.tau_m = get_or(j, "tau_m", lif.tau_m);
  lif.v_threshold = get_or(j, "v_threshold", lif.v_threshold);
  lif.v_reset = get_or(j, "v_reset", lif.v_reset);
  lif.v_rest = get_or(j, "v_rest", lif.v_rest);
  lif.input_gain = get_or(j, "input_gain", lif.input_gain);
  lif.synaptic_gain = get_or(j, "synaptic_gain", lif.synaptic_gain);
  lif.floor_factor = get_or(j, "floor_factor", lif.floor_factor);
  return lif;
}

CooperateConfig cooperate_from_json(const json& j) {
  CooperateConfig cc;
  cc.ss = get_or(j, "ss", cc.ss);
  cc.ts = get_or(j, "ts", cc.ts);
  cc.op = parse_op(get_or<std::string>(j, "op", std::string(to_string(cc.op))));
  return cc;
}

json FusionConfig::to_json() const {
  return json{{"encoding", spikefuse::to_json(encoding)},
              {"lif", spikefuse::to_json(lif)},
              {"cooperate", spikefuse::to_json(cooperate)},
              {"datasets", json{{"norms", norms_id}, {"embeddings", embeddings_id}, {"eval", eval_ids}}}};
}

FusionConfig FusionConfig::from_json(const json& j) {
  FusionConfig cfg;
  cfg.encoding = encoding_from_json(j.value("encoding", json::object()));
  cfg.lif = lif_from_json(j.value("lif", json::object()));
  cfg.cooperate = cooperate_from_json(j.value("cooperate", json::object()));
  const json datasets = j.value("datasets", json::object());
  cfg.norms_id = get_or<std::string>(datasets, "norms", "");
  cfg.embeddings_id = get_or<std::string>(datasets, "embeddings", "");
  cfg.eval_ids = get_or<std::vector<std::string>>(datasets, "eval", {});
  return cfg;
}

std::uint64_t FusionConfig::fingerprint() const { return fnv1a64(to_json().dump()); }

}  // namespace spikefuse
