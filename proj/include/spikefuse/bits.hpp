#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spikefuse {

/// Packed bit vector. Bit i lives in word i / 64 at position i % 64.
/// Bits past size() in the last word are kept at zero, so word-wise
/// comparison, hashing and popcount never see garbage.
class BitVector {
 public:
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t n_bits) : size_(n_bits), words_(word_count(n_bits), 0) {}

  static constexpr std::size_t word_count(std::size_t n_bits) noexcept {
    return (n_bits + kWordBits - 1) / kWordBits;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool test(std::size_t i) const noexcept { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }
  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  void reserve(std::size_t n_bits) { words_.reserve(word_count(n_bits)); }
  void push_back(bool bit);
  /// Appends the low `n_bits` bits of `word` (n_bits <= 64).
  void append_word(std::uint64_t word, std::size_t n_bits);
  void append(const BitVector& other);

  /// 64 bits starting at `offset`; positions at or past size() read as zero.
  std::uint64_t word_at(std::size_t offset) const noexcept;
  /// Bits [offset, offset + length); positions past size() read as zero.
  BitVector slice(std::size_t offset, std::size_t length) const;
  /// True when any bit in [begin, end) is set. `end` is clamped to size().
  bool any(std::size_t begin, std::size_t end) const noexcept;
  std::size_t count() const noexcept;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  /// Mutable word access; callers must leave the tail bits zero.
  std::span<std::uint64_t> words() noexcept { return words_; }

  /// Byte k holds bits 8k..8k+7 (bit 8k in the least significant position),
  /// printed as two lowercase hex digits. ceil(size/8) bytes.
  std::string to_hex() const;
  static BitVector from_hex(std::string_view hex, std::size_t n_bits);
  std::string to_string() const;  // '0'/'1' per bit

  std::uint64_t hash() const noexcept;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  void clear_tail() noexcept;

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Number of positions where a and b differ. Sizes must match.
std::size_t hamming_distance(const BitVector& a, const BitVector& b);

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const noexcept { return static_cast<std::size_t>(v.hash()); }
};

}  // namespace spikefuse
