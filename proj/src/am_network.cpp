#include "spikefuse/am_network.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "spikefuse/error.hpp"

namespace spikefuse {

ModalityCorrelation::ModalityCorrelation(std::vector<std::string> labels, std::vector<double> matrix)
    : labels_(std::move(labels)), matrix_(std::move(matrix)) {
  const std::size_t n = labels_.size();
  if (matrix_.size() != n * n) {
    throw ConfigError("correlation matrix has " + std::to_string(matrix_.size()) + " entries for " +
                      std::to_string(n) + " modalities");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double w = at(i, j);
      if (!std::isfinite(w) || w < -1.0 || w > 1.0) throw ConfigError("correlation entries must lie in [-1, 1]");
      if (w != at(j, i)) throw ConfigError("correlation matrix must be symmetric");
    }
  }
}

void LifParams::validate() const {
  if (!(tau_m > 0.0)) throw ConfigError("lif tau_m must be positive");
  if (!(v_threshold > v_reset)) throw ConfigError("lif v_threshold must exceed v_reset");
  if (!std::isfinite(input_gain) || !std::isfinite(synaptic_gain)) throw ConfigError("lif gains must be finite");
  if (!std::isfinite(v_rest) || !(floor_factor >= 0.0)) throw ConfigError("lif v_rest/floor_factor invalid");
}

ModalityCorrelation compute_modality_correlations(const NormDataset& norms) {
  const std::size_t n = norms.modality_names.size();
  const auto& vectors = norms.vectors.vectors();
  if (vectors.size() < 3) throw ConfigError("modality correlations need at least 3 concepts");
  const double count = static_cast<double>(vectors.size());

  std::vector<double> mean(n, 0.0);
  for (const auto& v : vectors) {
    for (std::size_t d = 0; d < n; ++d) mean[d] += v.values[d];
  }
  for (auto& m : mean) m /= count;

  std::vector<double> cov(n * n, 0.0);
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < n; ++i) {
      const double di = v.values[i] - mean[i];
      for (std::size_t j = i; j < n; ++j) cov[i * n + j] += di * (v.values[j] - mean[j]);
    }
  }

  std::vector<double> corr(n * n, 0.0);
  bool warned = false;
  for (std::size_t i = 0; i < n; ++i) {
    corr[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double denom = std::sqrt(cov[i * n + i] * cov[j * n + j]);
      double r = 0.0;
      if (denom > 0.0) {
        r = std::clamp(cov[i * n + j] / denom, -1.0, 1.0);
      } else if (!warned) {
        spdlog::warn("constant modality column; its correlations are set to 0");
        warned = true;
      }
      corr[i * n + j] = r;
      corr[j * n + i] = r;
    }
  }
  return ModalityCorrelation(norms.modality_names, std::move(corr));
}

SpikeRaster simulate_lif_network(const SpikeRaster& input, const ModalityCorrelation& weights, const LifParams& lif) {
  lif.validate();
  const std::size_t n = input.rows();
  if (weights.size() != n) {
    throw ConfigError("LIF network has " + std::to_string(n) + " input rows but " +
                      std::to_string(weights.size()) + " weight rows");
  }
  const std::size_t steps = input.t_steps();
  SpikeRaster output(n, steps);
  std::vector<double> potential(n, lif.v_rest);
  std::vector<char> previous(n, 0);
  std::vector<char> current(n, 0);
  const double floor = lif.v_floor();

  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double recurrent = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && previous[j]) recurrent += weights.at(i, j);
      }
      const double drive = lif.input_gain * (input.at(i, t) ? 1.0 : 0.0) + lif.synaptic_gain * recurrent;
      double v = potential[i] + (-(potential[i] - lif.v_rest) + drive) / lif.tau_m;
      v = std::max(v, floor);
      if (v >= lif.v_threshold) {
        current[i] = 1;
        output.set(i, t);
        v = lif.v_reset;
      } else {
        current[i] = 0;
      }
      potential[i] = v;
    }
    previous.swap(current);
  }
  return output;
}

SpikeRaster run_am(const ConceptVector& cv, const ModalityCorrelation& corr, const LifParams& lif,
                   const EncodingConfig& cfg) {
  if (cv.values.size() != corr.size()) {
    throw ConfigError("concept '" + cv.name + "' has " + std::to_string(cv.values.size()) +
                      " modalities, network has " + std::to_string(corr.size()));
  }
  std::vector<std::string> labels;
  labels.reserve(corr.size());
  for (const auto& label : corr.labels()) labels.push_back("ms:" + label);
  const SpikeRaster input = poisson_encode(cv.values, cfg, cv.name, labels);
  return simulate_lif_network(input, corr, lif);
}

}  // namespace spikefuse
