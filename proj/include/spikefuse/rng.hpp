#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spikefuse {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed of the substream owned by one (run seed, concept, row) triple.
/// Independent of iteration order, so concepts can be encoded in any order
/// or in parallel without changing a single bit.
constexpr std::uint64_t stream_seed(std::uint64_t run_seed, std::string_view concept_name,
                                    std::string_view row) noexcept {
  std::uint64_t h = splitmix64(run_seed);
  h = splitmix64(h ^ fnv1a64(concept_name));
  h = splitmix64(h ^ fnv1a64(row));
  return h;
}

/// Uniform doubles in [0, 1) with a platform-independent bit recipe
/// (std::uniform_real_distribution is implementation defined).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double next() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double operator()() noexcept { return next(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace spikefuse
