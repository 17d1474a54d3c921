#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "spikefuse/bits.hpp"
#include "spikefuse/ingest.hpp"

namespace spikefuse {

/// Binary channels x time matrix. Stored row-major in one packed bit vector
/// (bit r * t_steps + t), which is also the flattening order the temporal
/// cooperation uses.
class SpikeRaster {
 public:
  SpikeRaster() = default;
  SpikeRaster(std::size_t rows, std::size_t t_steps);
  SpikeRaster(std::size_t rows, std::size_t t_steps, BitVector flat);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t t_steps() const noexcept { return t_steps_; }

  bool at(std::size_t row, std::size_t t) const noexcept { return bits_.test(row * t_steps_ + t); }
  void set(std::size_t row, std::size_t t, bool value = true) noexcept { bits_.set(row * t_steps_ + t, value); }

  std::size_t row_count(std::size_t row) const;
  std::size_t count() const noexcept { return bits_.count(); }

  const BitVector& flat() const noexcept { return bits_; }

  friend bool operator==(const SpikeRaster&, const SpikeRaster&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t t_steps_ = 0;
  BitVector bits_;
};

struct EncodingConfig {
  std::size_t t_steps = 1000;
  double dt = 1.0;
  std::uint64_t rng_seed = 42;

  /// Throws ConfigError unless t_steps > 0 and 0 < dt <= 1.
  void validate() const;

  friend bool operator==(const EncodingConfig&, const EncodingConfig&) = default;
};

/// Per-dimension min-max scaling over the whole set. Constant dimensions map
/// to 0 with a warning.
VectorSet min_max_normalize(const VectorSet& vectors);
NormDataset min_max_normalize(const NormDataset& dataset);
EmbeddingDataset min_max_normalize(const EmbeddingDataset& dataset);

/// Rate-codes each value as a spike train: at step t of row i a spike is
/// emitted iff values[i] * dt > x, x ~ U[0,1) drawn from the substream of
/// (cfg.rng_seed, concept, row label). Row labels default to "row<i>".
SpikeRaster poisson_encode(std::span<const double> values, const EncodingConfig& cfg, std::string_view concept_name,
                           std::span<const std::string> row_labels = {});

struct SpikeCountStats {
  double lambda = 0.0;  // r * t_steps * dt
  double mean = 0.0;
  double variance = 0.0;
  double chi_square = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;  // goodness of fit against Poisson(lambda)
};

/// Encodes `trials` independent single-row trains of intensity r and compares
/// the spike counts with Poisson(r * t_steps * dt). Requires trials >= 100.
SpikeCountStats spike_count_distribution_check(double r, const EncodingConfig& cfg, std::size_t trials);

/// Debug dump: "rows t_steps" then one line of '0'/'1' per row.
void write_raster(std::ostream& out, const SpikeRaster& raster);
void write_raster(const std::filesystem::path& path, const SpikeRaster& raster);
SpikeRaster read_raster(std::istream& in);
SpikeRaster read_raster(const std::filesystem::path& path);

}  // namespace spikefuse
