#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spikefuse/am_network.hpp"
#include "spikefuse/cooperate.hpp"
#include "spikefuse/encoding.hpp"

namespace spikefuse {

/// Every knob of one pipeline run, serializable and fingerprinted.
struct FusionConfig {
  EncodingConfig encoding;
  LifParams lif;
  CooperateConfig cooperate;
  std::string norms_id;
  std::string embeddings_id;
  std::vector<std::string> eval_ids;

  /// Canonical serialization: keys sorted, doubles in shortest round-trip form.
  nlohmann::json to_json() const;
  static FusionConfig from_json(const nlohmann::json& j);
  /// FNV-1a 64 of the canonical serialization.
  std::uint64_t fingerprint() const;

  friend bool operator==(const FusionConfig&, const FusionConfig&) = default;
};

nlohmann::json to_json(const EncodingConfig& cfg);
nlohmann::json to_json(const LifParams& lif);
nlohmann::json to_json(const CooperateConfig& cc);
EncodingConfig encoding_from_json(const nlohmann::json& j);
LifParams lif_from_json(const nlohmann::json& j);
CooperateConfig cooperate_from_json(const nlohmann::json& j);

/// Rounds to 9 decimal places, the precision every report uses.
double round9(double x);

}  // namespace spikefuse
