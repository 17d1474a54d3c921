#include "spikefuse/encoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <spdlog/spdlog.h>

#include "spikefuse/error.hpp"
#include "spikefuse/rng.hpp"

namespace spikefuse {

SpikeRaster::SpikeRaster(std::size_t rows, std::size_t t_steps)
    : rows_(rows), t_steps_(t_steps), bits_(rows * t_steps) {}

SpikeRaster::SpikeRaster(std::size_t rows, std::size_t t_steps, BitVector flat)
    : rows_(rows), t_steps_(t_steps), bits_(std::move(flat)) {
  if (bits_.size() != rows * t_steps) {
    throw ConfigError("raster payload has " + std::to_string(bits_.size()) + " bits, expected " +
                      std::to_string(rows * t_steps));
  }
}

std::size_t SpikeRaster::row_count(std::size_t row) const {
  std::size_t total = 0;
  const std::size_t begin = row * t_steps_;
  for (std::size_t done = 0; done < t_steps_; done += BitVector::kWordBits) {
    std::uint64_t w = bits_.word_at(begin + done);
    const std::size_t take = std::min<std::size_t>(BitVector::kWordBits, t_steps_ - done);
    if (take < BitVector::kWordBits) w &= (std::uint64_t{1} << take) - 1;
    total += static_cast<std::size_t>(std::popcount(w));
  }
  return total;
}

void EncodingConfig::validate() const {
  if (t_steps == 0) throw ConfigError("t_steps must be positive");
  if (!(dt > 0.0) || dt > 1.0) throw ConfigError("dt must lie in (0, 1] so that r * dt stays a probability");
}

VectorSet min_max_normalize(const VectorSet& vectors) {
  const std::size_t dim = vectors.dim();
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (const auto& v : vectors) {
    for (std::size_t d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], v.values[d]);
      hi[d] = std::max(hi[d], v.values[d]);
    }
  }
  std::size_t constant = 0;
  for (std::size_t d = 0; d < dim; ++d) {
    if (!(hi[d] > lo[d])) ++constant;
  }
  if (constant != 0 && !vectors.empty()) {
    spdlog::warn("min-max normalization: {} of {} dimensions are constant and map to 0", constant, dim);
  }

  VectorSet out(vectors.kind());
  for (const auto& v : vectors) {
    ConceptVector scaled{v.name, std::vector<double>(dim), v.kind};
    for (std::size_t d = 0; d < dim; ++d) {
      const double span = hi[d] - lo[d];
      scaled.values[d] = span > 0.0 ? std::clamp((v.values[d] - lo[d]) / span, 0.0, 1.0) : 0.0;
    }
    out.add(std::move(scaled));
  }
  return out;
}

NormDataset min_max_normalize(const NormDataset& dataset) {
  return NormDataset{dataset.modality_names, min_max_normalize(dataset.vectors)};
}

EmbeddingDataset min_max_normalize(const EmbeddingDataset& dataset) {
  return EmbeddingDataset{dataset.dim, min_max_normalize(dataset.vectors)};
}

SpikeRaster poisson_encode(std::span<const double> values, const EncodingConfig& cfg, std::string_view concept_name,
                           std::span<const std::string> row_labels) {
  cfg.validate();
  if (!row_labels.empty() && row_labels.size() != values.size()) {
    throw ConfigError("poisson_encode: " + std::to_string(row_labels.size()) + " row labels for " +
                      std::to_string(values.size()) + " values");
  }
  BitVector flat;
  flat.reserve(values.size() * cfg.t_steps);
  for (std::size_t row = 0; row < values.size(); ++row) {
    const double r = values[row];
    if (!(r >= 0.0 && r <= 1.0)) {
      throw ConfigError("poisson_encode: intensity " + std::to_string(r) + " of '" + std::string(concept_name) +
                        "' row " + std::to_string(row) + " is outside [0, 1]; normalize first");
    }
    const double threshold = r * cfg.dt;
    if (threshold <= 0.0) {
      for (std::size_t done = 0; done < cfg.t_steps; done += BitVector::kWordBits) {
        flat.append_word(0, std::min<std::size_t>(BitVector::kWordBits, cfg.t_steps - done));
      }
      continue;
    }
    const std::string label = row_labels.empty() ? "row" + std::to_string(row) : row_labels[row];
    UniformStream uniform(stream_seed(cfg.rng_seed, concept_name, label));
    for (std::size_t done = 0; done < cfg.t_steps; done += BitVector::kWordBits) {
      const std::size_t take = std::min<std::size_t>(BitVector::kWordBits, cfg.t_steps - done);
      std::uint64_t word = 0;
      for (std::size_t k = 0; k < take; ++k) {
        if (threshold > uniform.next()) word |= std::uint64_t{1} << k;
      }
      flat.append_word(word, take);
    }
  }
  return SpikeRaster(values.size(), cfg.t_steps, std::move(flat));
}

SpikeCountStats spike_count_distribution_check(double r, const EncodingConfig& cfg, std::size_t trials) {
  if (trials < 100) throw ConfigError("spike_count_distribution_check needs at least 100 trials");
  cfg.validate();
  if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("intensity must lie in [0, 1]");

  SpikeCountStats stats;
  stats.lambda = r * static_cast<double>(cfg.t_steps) * cfg.dt;

  std::vector<std::size_t> counts(trials);
  const double value[] = {r};
  for (std::size_t k = 0; k < trials; ++k) {
    counts[k] = poisson_encode(value, cfg, "trial" + std::to_string(k)).count();
  }
  double sum = 0.0;
  for (auto c : counts) sum += static_cast<double>(c);
  stats.mean = sum / static_cast<double>(trials);
  double ss = 0.0;
  for (auto c : counts) ss += (static_cast<double>(c) - stats.mean) * (static_cast<double>(c) - stats.mean);
  stats.variance = ss / static_cast<double>(trials - 1);

  if (stats.lambda == 0.0) {
    const bool all_zero = std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c == 0; });
    stats.p_value = all_zero ? 1.0 : 0.0;
    return stats;
  }

  // Bins over n = 0, 1, ... merged until each expects >= 5 observations; the
  // last bin absorbs the upper tail.
  const std::size_t max_count = *std::max_element(counts.begin(), counts.end());
  std::vector<std::size_t> histogram(max_count + 1, 0);
  for (auto c : counts) ++histogram[c];
  const auto pmf = [&](std::size_t n) {
    const double x = static_cast<double>(n);
    return std::exp(x * std::log(stats.lambda) - stats.lambda - std::lgamma(x + 1.0));
  };
  const double n_trials = static_cast<double>(trials);
  std::vector<double> expected_bins;
  std::vector<double> observed_bins;
  double expected = 0.0;
  double observed = 0.0;
  double cumulative = 0.0;
  const std::size_t scan_limit = std::max(max_count, static_cast<std::size_t>(stats.lambda * 3 + 50));
  for (std::size_t n = 0; n <= scan_limit; ++n) {
    const double p = pmf(n);
    cumulative += p;
    expected += p * n_trials;
    observed += n < histogram.size() ? static_cast<double>(histogram[n]) : 0.0;
    const double tail = std::max(0.0, 1.0 - cumulative) * n_trials;
    if (expected >= 5.0 && tail >= 5.0) {
      expected_bins.push_back(expected);
      observed_bins.push_back(observed);
      expected = 0.0;
      observed = 0.0;
    }
  }
  expected += std::max(0.0, 1.0 - cumulative) * n_trials;
  if (!expected_bins.empty() && expected < 5.0) {
    expected_bins.back() += expected;
    observed_bins.back() += observed;
  } else {
    expected_bins.push_back(expected);
    observed_bins.push_back(observed);
  }
  for (std::size_t b = 0; b < expected_bins.size(); ++b) {
    const double diff = observed_bins[b] - expected_bins[b];
    stats.chi_square += diff * diff / expected_bins[b];
  }
  stats.degrees_of_freedom = expected_bins.size() > 1 ? expected_bins.size() - 1 : 0;
  stats.p_value = stats.degrees_of_freedom == 0
                      ? 1.0
                      : boost::math::gamma_q(static_cast<double>(stats.degrees_of_freedom) / 2.0, stats.chi_square / 2.0);
  return stats;
}

void write_raster(std::ostream& out, const SpikeRaster& raster) {
  out << raster.rows() << ' ' << raster.t_steps() << '\n';
  std::string line(raster.t_steps(), '0');
  for (std::size_t r = 0; r < raster.rows(); ++r) {
    for (std::size_t t = 0; t < raster.t_steps(); ++t) line[t] = raster.at(r, t) ? '1' : '0';
    out << line << '\n';
  }
}

void write_raster(const std::filesystem::path& path, const SpikeRaster& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string(), 0, "cannot create raster file");
  write_raster(out, raster);
}

SpikeRaster read_raster(std::istream& in) {
  std::size_t rows = 0;
  std::size_t t_steps = 0;
  if (!(in >> rows >> t_steps)) throw DataError("raster header must be 'rows t_steps'");
  SpikeRaster raster(rows, t_steps);
  std::string line;
  std::getline(in, line);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw DataError("raster truncated at row " + std::to_string(r));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != t_steps) throw DataError("raster row " + std::to_string(r) + " has wrong length");
    for (std::size_t t = 0; t < t_steps; ++t) {
      if (line[t] == '1') {
        raster.set(r, t);
      } else if (line[t] != '0') {
        throw DataError("raster row " + std::to_string(r) + " contains a non-binary cell");
      }
    }
  }
  return raster;
}

SpikeRaster read_raster(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string(), 0, "cannot open raster file");
  return read_raster(in);
}

}  // namespace spikefuse
