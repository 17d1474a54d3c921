#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "spikefuse/bits.hpp"
#include "spikefuse/encoding.hpp"

namespace spikefuse {

/// Cellwise spatial cooperation. `nor` keeps its conventional config name but
/// follows the truth table 0 when the cells agree, 1 when they differ.
enum class CooperateOp { and_op, or_op, nor };

inline constexpr std::array<CooperateOp, 3> kAllOps{CooperateOp::and_op, CooperateOp::nor, CooperateOp::or_op};

std::string_view to_string(CooperateOp op);
/// Accepts "AND", "OR", "NOR" (any case).
CooperateOp parse_op(std::string_view text);

struct CooperateConfig {
  std::size_t ss = 1;  // spatial stride
  std::size_t ts = 1;  // temporal stride
  CooperateOp op = CooperateOp::or_op;

  /// Throws ConfigError unless ss >= 1, ts >= 1 and ts <= d_ms * t_steps.
  void validate(std::size_t d_ms, std::size_t t_steps) const;

  friend bool operator==(const CooperateConfig&, const CooperateConfig&) = default;
};

/// The fused code of one concept under one configuration.
struct BinaryRepresentation {
  std::string name;
  BitVector bits;
  std::uint64_t config_fingerprint = 0;

  friend bool operator==(const BinaryRepresentation&, const BinaryRepresentation&) = default;
};

/// Number of sliding windows over the text raster: ceil((d_text - d_ms) / ss).
std::size_t block_count(std::size_t d_text, std::size_t d_ms, std::size_t ss);

/// ceil((d_text - d_ms) / ss) * ceil(d_ms * t_steps / ts). Requires d_text > d_ms.
std::size_t expected_output_dims(std::size_t d_text, std::size_t d_ms, std::size_t t_steps, std::size_t ss,
                                 std::size_t ts);

/// Rows [i * ss, i * ss + d_ms) of the text raster; rows past the end are zero.
SpikeRaster extract_block(const SpikeRaster& text_raster, std::size_t i, std::size_t ss, std::size_t d_ms);

SpikeRaster spatial_cooperate(const SpikeRaster& block, const SpikeRaster& ms_raster, CooperateOp op);

/// Row-major flatten, then one OR bit per consecutive window of ts bits (the
/// last window may be shorter). Output length ceil(rows * t_steps / ts).
BitVector temporal_cooperate(const SpikeRaster& sc, std::size_t ts);

/// Concatenation over every block of temporal(spatial(block_i, ms)).
BitVector fuse_bits(const SpikeRaster& text_raster, const SpikeRaster& ms_raster, const CooperateConfig& cc);

BinaryRepresentation fuse(const SpikeRaster& text_raster, const SpikeRaster& ms_raster, const CooperateConfig& cc,
                          std::string name = {}, std::uint64_t config_fingerprint = 0);

/// Re-reduces a ts = 1 code (blocks of `block_bits` cooperated bits laid end
/// to end) to stride ts. Equal to fuse_bits with the same ss/op and stride ts.
BitVector reduce_blocks(const BitVector& unit_code, std::size_t block_bits, std::size_t ts);

}  // namespace spikefuse
