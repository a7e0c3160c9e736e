#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace champion {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives a child seed from a parent seed and a sequence of counters.
// Streams with distinct counter tuples are statistically independent, and the
// result depends only on the values, never on evaluation order or threading.
constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                    std::initializer_list<std::uint64_t> counters) noexcept {
  std::uint64_t h = mix64(parent + 0x9E3779B97F4A7C15ULL);
  for (std::uint64_t c : counters) {
    h = mix64(h ^ mix64(c + 0xD1B54A32D192ED03ULL));
  }
  return h;
}

// Small counter-based generator; satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  // Uniform double in [0, 1) with 53 bits of resolution. Platform independent,
  // unlike std::uniform_real_distribution.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace champion
