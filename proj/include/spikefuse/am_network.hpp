#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spikefuse/encoding.hpp"
#include "spikefuse/ingest.hpp"

namespace spikefuse {

/// Symmetric modality x modality correlation matrix. Diagonal entries are
/// never read: neurons are not self-connected.
class ModalityCorrelation {
 public:
  ModalityCorrelation() = default;
  /// Row-major n x n matrix; throws ConfigError unless it is symmetric with
  /// off-diagonal entries in [-1, 1].
  ModalityCorrelation(std::vector<std::string> labels, std::vector<double> matrix);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  double at(std::size_t i, std::size_t j) const noexcept { return matrix_[i * labels_.size() + j]; }
  std::span<const double> matrix() const noexcept { return matrix_; }

  bool operator==(const ModalityCorrelation&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> matrix_;
};

struct LifParams {
  double tau_m = 10.0;
  double v_threshold = 1.0;
  double v_reset = 0.0;
  double v_rest = 0.0;
  double input_gain = 1.5;
  double synaptic_gain = 0.5;
  /// Potential floor is v_rest - floor_factor * (v_threshold - v_rest).
  double floor_factor = 5.0;

  void validate() const;
  double v_floor() const noexcept { return v_rest - floor_factor * (v_threshold - v_rest); }

  friend bool operator==(const LifParams&, const LifParams&) = default;
};

/// Pearson correlation of every pair of modality columns over all concepts.
/// A constant column correlates 0 with everything (warning logged).
ModalityCorrelation compute_modality_correlations(const NormDataset& norms);

/// Discrete-time LIF network driven by an input spike raster (one row per
/// neuron). Per step: drive_i = input_gain * in_i(t)
///   + synaptic_gain * sum_{j != i} w_ij * out_j(t - 1);
/// V_i += (-(V_i - v_rest) + drive_i) / tau_m, clamped below at v_floor();
/// V_i >= v_threshold emits a spike and resets to v_reset.
SpikeRaster simulate_lif_network(const SpikeRaster& input, const ModalityCorrelation& weights, const LifParams& lif);

/// Associative-merge multisensory channel for one normalized concept vector:
/// Poisson-encodes the modality intensities (substreams keyed by modality
/// label) and runs them through the correlation-weighted LIF network.
SpikeRaster run_am(const ConceptVector& cv, const ModalityCorrelation& corr, const LifParams& lif,
                   const EncodingConfig& cfg);

}  // namespace spikefuse
