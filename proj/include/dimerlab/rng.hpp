#pragma once

#include <cmath>
#include <cstdint>

namespace dimerlab::rng {

// SplitMix64 constants (Steele, Lea & Flood, "Fast splittable pseudorandom
// number generators", OOPSLA 2014). Used here in counter mode: the i-th value
// of a stream is mix64(seed + (i+1)*kGamma), so draws are random-access and
// streams derived from distinct seeds are independent for any interleaving.
inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Derives a child stream seed; chain calls to fold several tag values.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ mix64(value + kGamma));
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  // Value at absolute counter position i, independent of next_* calls.
  std::uint64_t at(std::uint64_t i) const { return mix64(seed_ + (i + 1) * kGamma); }

  std::uint64_t next_u64() { return at(counter_++); }

  // Uniform on (0,1] with 53-bit resolution; never returns 0.
  double next_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53; }

  // Exp(1) draw, always finite and >= 0.
  double next_exp1() { return -std::log(next_unit()); }

  // Unbiased uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t min = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= min) return r % n;
    }
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }
  void set_counter(std::uint64_t c) { counter_ = c; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

inline double unit_from_bits(std::uint64_t r) {
  return static_cast<double>((r >> 11) + 1) * 0x1p-53;
}

}  // namespace dimerlab::rng
