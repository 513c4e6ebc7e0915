#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace surfdiff {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-addressable word stream: word i of key k equals SplitMix{k}'s i-th
// output, so sequential and random access never disagree.
constexpr std::uint64_t keyed_word(std::uint64_t key, std::uint64_t counter) {
  return mix64(key + kGolden * (counter + 1));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return keyed_word(master, stream);
}
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return keyed_word(keyed_word(master, a), b);
}

constexpr double u01_from(std::uint64_t w) { return static_cast<double>(w >> 11) * 0x1p-53; }
constexpr double open01_from(std::uint64_t w) { return static_cast<double>((w >> 11) + 1) * 0x1p-53; }

struct SplitMix {
  std::uint64_t state = 0;

  constexpr std::uint64_t next() {
    state += kGolden;
    return mix64(state);
  }
  constexpr double next_u01() { return u01_from(next()); }      // [0, 1)
  constexpr double next_open01() { return open01_from(next()); }  // (0, 1]
};

struct NormalPair {
  double z0 = 0.0;
  double z1 = 0.0;
};

inline NormalPair normal_pair_from(std::uint64_t w0, std::uint64_t w1) {
  const double r = std::sqrt(-2.0 * std::log(open01_from(w0)));
  const double a = 2.0 * std::numbers::pi * u01_from(w1);
  return {r * std::cos(a), r * std::sin(a)};
}

inline NormalPair normal_pair(SplitMix& g) {
  const std::uint64_t w0 = g.next();
  const std::uint64_t w1 = g.next();
  return normal_pair_from(w0, w1);
}

// Standard normal pair addressed by (key, step); no sequential state.
inline NormalPair noise_pair(std::uint64_t key, std::uint64_t step) {
  return normal_pair_from(keyed_word(key, 2 * step), keyed_word(key, 2 * step + 1));
}

// Exact Poisson count by Knuth's product method, chunked so exp(-chunk)
// stays comfortably inside the normal range for any mean.
inline std::uint64_t poisson_count(SplitMix& g, double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson_count: mean must be nonnegative");
  std::uint64_t total = 0;
  while (mean > 0.0) {
    const double chunk = std::min(mean, 256.0);
    mean -= chunk;
    const double limit = std::exp(-chunk);
    double p = g.next_open01();
    while (p > limit) {
      ++total;
      p *= g.next_open01();
    }
  }
  return total;
}

}  // namespace surfdiff
