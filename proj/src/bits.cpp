#include "spikefuse/bits.hpp"

#include <bit>

#include "spikefuse/error.hpp"
#include "spikefuse/rng.hpp"

namespace spikefuse {

namespace {

constexpr std::uint64_t low_mask(std::size_t n_bits) noexcept {
  return n_bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_bits) - 1;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

void BitVector::clear_tail() noexcept {
  const std::size_t used = size_ % kWordBits;
  if (used != 0) {
    words_.back() &= low_mask(used);
  }
}

void BitVector::push_back(bool bit) {
  if (size_ % kWordBits == 0) {
    words_.push_back(0);
  }
  if (bit) {
    words_.back() |= std::uint64_t{1} << (size_ % kWordBits);
  }
  ++size_;
}

void BitVector::append_word(std::uint64_t word, std::size_t n_bits) {
  if (n_bits == 0) return;
  word &= low_mask(n_bits);
  const std::size_t shift = size_ % kWordBits;
  if (shift == 0) {
    words_.push_back(word);
  } else {
    words_.back() |= word << shift;
    if (shift + n_bits > kWordBits) {
      words_.push_back(word >> (kWordBits - shift));
    }
  }
  size_ += n_bits;
}

void BitVector::append(const BitVector& other) {
  reserve(size_ + other.size_);
  std::size_t remaining = other.size_;
  for (std::uint64_t w : other.words_) {
    const std::size_t take = remaining < kWordBits ? remaining : kWordBits;
    append_word(w, take);
    remaining -= take;
  }
}

std::uint64_t BitVector::word_at(std::size_t offset) const noexcept {
  if (offset >= size_) return 0;
  const std::size_t index = offset / kWordBits;
  const std::size_t shift = offset % kWordBits;
  std::uint64_t w = words_[index] >> shift;
  if (shift != 0 && index + 1 < words_.size()) {
    w |= words_[index + 1] << (kWordBits - shift);
  }
  return w;
}

BitVector BitVector::slice(std::size_t offset, std::size_t length) const {
  BitVector out;
  out.reserve(length);
  for (std::size_t done = 0; done < length; done += kWordBits) {
    const std::size_t take = length - done < kWordBits ? length - done : kWordBits;
    out.append_word(word_at(offset + done), take);
  }
  return out;
}

bool BitVector::any(std::size_t begin, std::size_t end) const noexcept {
  if (end > size_) end = size_;
  if (begin >= end) return false;
  std::size_t first = begin / kWordBits;
  const std::size_t last = (end - 1) / kWordBits;
  const std::uint64_t head = ~std::uint64_t{0} << (begin % kWordBits);
  const std::uint64_t tail = low_mask(end - last * kWordBits);
  if (first == last) {
    return (words_[first] & head & tail) != 0;
  }
  if ((words_[first] & head) != 0) return true;
  for (++first; first < last; ++first) {
    if (words_[first] != 0) return true;
  }
  return (words_[last] & tail) != 0;
}

std::size_t BitVector::count() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::string BitVector::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t n_bytes = (size_ + 7) / 8;
  std::string out;
  out.reserve(n_bytes * 2);
  for (std::size_t k = 0; k < n_bytes; ++k) {
    const auto byte = static_cast<unsigned>((words_[k / 8] >> ((k % 8) * 8)) & 0xffu);
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xfu]);
  }
  return out;
}

BitVector BitVector::from_hex(std::string_view hex, std::size_t n_bits) {
  if (hex.size() != 2 * ((n_bits + 7) / 8)) {
    throw DataError("hex payload has " + std::to_string(hex.size()) + " digits, expected " +
                    std::to_string(2 * ((n_bits + 7) / 8)) + " for " + std::to_string(n_bits) + " bits");
  }
  BitVector out(n_bits);
  for (std::size_t k = 0; k < hex.size() / 2; ++k) {
    const int hi = hex_value(hex[2 * k]);
    const int lo = hex_value(hex[2 * k + 1]);
    if (hi < 0 || lo < 0) throw DataError("invalid hex digit in bit payload");
    const auto byte = static_cast<std::uint64_t>(hi * 16 + lo);
    out.words_[k / 8] |= byte << ((k % 8) * 8);
  }
  const std::uint64_t before = out.words_.empty() ? 0 : out.words_.back();
  out.clear_tail();
  if (!out.words_.empty() && before != out.words_.back()) {
    throw DataError("hex payload sets bits past the declared length");
  }
  return out;
}

std::string BitVector::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(i)) out[i] = '1';
  }
  return out;
}

std::uint64_t BitVector::hash() const noexcept {
  std::uint64_t h = splitmix64(size_);
  for (std::uint64_t w : words_) h = splitmix64(h ^ w);
  return h;
}

std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) {
    throw ConfigError("hamming distance on bit vectors of different length (" + std::to_string(a.size()) +
                      " vs " + std::to_string(b.size()) + ")");
  }
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t total = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) total += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return total;
}

}  // namespace spikefuse
