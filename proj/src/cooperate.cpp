#include "spikefuse/cooperate.hpp"

#include <algorithm>
#include <cctype>

#include "spikefuse/error.hpp"

namespace spikefuse {

namespace {

std::uint64_t combine(std::uint64_t a, std::uint64_t b, CooperateOp op) noexcept {
  switch (op) {
    case CooperateOp::and_op: return a & b;
    case CooperateOp::or_op: return a | b;
    case CooperateOp::nor: return a ^ b;
  }
  return 0;
}

// Collects output bits a word at a time.
class BitSink {
 public:
  explicit BitSink(BitVector& out) : out_(out) {}
  ~BitSink() { flush(); }
  BitSink(const BitSink&) = delete;
  BitSink& operator=(const BitSink&) = delete;

  void push(bool bit) noexcept {
    if (bit) word_ |= std::uint64_t{1} << fill_;
    if (++fill_ == BitVector::kWordBits) flush();
  }
  void flush() {
    out_.append_word(word_, fill_);
    word_ = 0;
    fill_ = 0;
  }

 private:
  BitVector& out_;
  std::uint64_t word_ = 0;
  std::size_t fill_ = 0;
};

// Windowed OR of bits [begin, begin + length) of `bits`, appended to `out`.
void append_windows(BitVector& out, const BitVector& bits, std::size_t begin, std::size_t length, std::size_t ts) {
  if (ts == 1) {
    for (std::size_t done = 0; done < length; done += BitVector::kWordBits) {
      out.append_word(bits.word_at(begin + done), std::min<std::size_t>(BitVector::kWordBits, length - done));
    }
    return;
  }
  BitSink sink(out);
  const std::size_t end = begin + length;
  for (std::size_t start = begin; start < end; start += ts) {
    sink.push(bits.any(start, std::min(start + ts, end)));
  }
}

}  // namespace

std::string_view to_string(CooperateOp op) {
  switch (op) {
    case CooperateOp::and_op: return "AND";
    case CooperateOp::or_op: return "OR";
    case CooperateOp::nor: return "NOR";
  }
  return "?";
}

CooperateOp parse_op(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "AND") return CooperateOp::and_op;
  if (upper == "OR") return CooperateOp::or_op;
  if (upper == "NOR") return CooperateOp::nor;
  throw ConfigError("unknown cooperate op '" + std::string(text) + "' (expected AND, OR or NOR)");
}

void CooperateConfig::validate(std::size_t d_ms, std::size_t t_steps) const {
  if (ss < 1) throw ConfigError("spatial stride ss must be >= 1");
  if (ts < 1) throw ConfigError("temporal stride ts must be >= 1");
  if (ts > d_ms * t_steps) {
    throw ConfigError("temporal stride ts=" + std::to_string(ts) + " exceeds d_ms * t_steps = " +
                      std::to_string(d_ms * t_steps));
  }
}

std::size_t block_count(std::size_t d_text, std::size_t d_ms, std::size_t ss) {
  if (d_text <= d_ms) {
    throw ConfigError("text dimension " + std::to_string(d_text) + " must exceed multisensory dimension " +
                      std::to_string(d_ms));
  }
  if (ss < 1) throw ConfigError("spatial stride ss must be >= 1");
  return (d_text - d_ms + ss - 1) / ss;
}

std::size_t expected_output_dims(std::size_t d_text, std::size_t d_ms, std::size_t t_steps, std::size_t ss,
                                 std::size_t ts) {
  if (ts < 1) throw ConfigError("temporal stride ts must be >= 1");
  const std::size_t blocks = block_count(d_text, d_ms, ss);
  return blocks * ((d_ms * t_steps + ts - 1) / ts);
}

SpikeRaster extract_block(const SpikeRaster& text_raster, std::size_t i, std::size_t ss, std::size_t d_ms) {
  const std::size_t blocks = block_count(text_raster.rows(), d_ms, ss);
  if (i >= blocks) {
    throw ConfigError("block index " + std::to_string(i) + " out of range (" + std::to_string(blocks) + " blocks)");
  }
  const std::size_t k = text_raster.t_steps();
  return SpikeRaster(d_ms, k, text_raster.flat().slice(i * ss * k, d_ms * k));
}

SpikeRaster spatial_cooperate(const SpikeRaster& block, const SpikeRaster& ms_raster, CooperateOp op) {
  if (block.rows() != ms_raster.rows() || block.t_steps() != ms_raster.t_steps()) {
    throw ConfigError("spatial cooperation needs equal shapes, got " + std::to_string(block.rows()) + "x" +
                      std::to_string(block.t_steps()) + " and " + std::to_string(ms_raster.rows()) + "x" +
                      std::to_string(ms_raster.t_steps()));
  }
  BitVector out = block.flat();
  auto words = out.words();
  const auto other = ms_raster.flat().words();
  for (std::size_t w = 0; w < words.size(); ++w) words[w] = combine(words[w], other[w], op);
  return SpikeRaster(block.rows(), block.t_steps(), std::move(out));
}

BitVector temporal_cooperate(const SpikeRaster& sc, std::size_t ts) {
  if (ts < 1) throw ConfigError("temporal stride ts must be >= 1");
  BitVector out;
  const std::size_t length = sc.rows() * sc.t_steps();
  out.reserve((length + ts - 1) / ts);
  append_windows(out, sc.flat(), 0, length, ts);
  return out;
}

BitVector fuse_bits(const SpikeRaster& text_raster, const SpikeRaster& ms_raster, const CooperateConfig& cc) {
  if (text_raster.t_steps() != ms_raster.t_steps()) {
    throw ConfigError("text and multisensory rasters must share t_steps");
  }
  const std::size_t d_ms = ms_raster.rows();
  const std::size_t k = ms_raster.t_steps();
  cc.validate(d_ms, k);
  const std::size_t blocks = block_count(text_raster.rows(), d_ms, cc.ss);
  const std::size_t block_bits = d_ms * k;
  const std::size_t n_words = BitVector::word_count(block_bits);

  BitVector out;
  out.reserve(blocks * ((block_bits + cc.ts - 1) / cc.ts));
  BitVector sc(block_bits);
  const auto ms_words = ms_raster.flat().words();
  const std::uint64_t tail_mask =
      block_bits % BitVector::kWordBits == 0 ? ~std::uint64_t{0}
                                             : (std::uint64_t{1} << (block_bits % BitVector::kWordBits)) - 1;
  for (std::size_t i = 0; i < blocks; ++i) {
    const std::size_t offset = i * cc.ss * k;
    auto words = sc.words();
    for (std::size_t w = 0; w < n_words; ++w) {
      words[w] = combine(text_raster.flat().word_at(offset + w * BitVector::kWordBits), ms_words[w], cc.op);
    }
    words[n_words - 1] &= tail_mask;
    append_windows(out, sc, 0, block_bits, cc.ts);
  }
  return out;
}

BinaryRepresentation fuse(const SpikeRaster& text_raster, const SpikeRaster& ms_raster, const CooperateConfig& cc,
                          std::string name, std::uint64_t config_fingerprint) {
  return BinaryRepresentation{std::move(name), fuse_bits(text_raster, ms_raster, cc), config_fingerprint};
}

BitVector reduce_blocks(const BitVector& unit_code, std::size_t block_bits, std::size_t ts) {
  if (ts < 1 || block_bits == 0 || unit_code.size() % block_bits != 0) {
    throw ConfigError("reduce_blocks: code length must be a whole number of blocks and ts >= 1");
  }
  if (ts == 1) return unit_code;
  const std::size_t blocks = unit_code.size() / block_bits;
  BitVector out;
  out.reserve(blocks * ((block_bits + ts - 1) / ts));
  for (std::size_t b = 0; b < blocks; ++b) append_windows(out, unit_code, b * block_bits, block_bits, ts);
  return out;
}

}  // namespace spikefuse
