#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace bellfrac {

/// splitmix64 step, used to derive well-separated engine seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic sub-stream derived from (seed, offset). Offsets are fixed by
/// the caller so the same draws happen regardless of evaluation order.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t offset) {
  std::uint64_t s = seed + 0x632be59bd9b4e019ULL * (offset + 1);
  return std::mt19937_64(splitmix64(s));
}

/// Uniform double in [0,1) with exactly 53 random bits; identical on every
/// platform, unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& gen) {
  return double(gen() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF draw from an unnormalized nonnegative weight vector.
/// The last positive entry absorbs any rounding deficit.
template <class Weights>
int sample_categorical(const Weights& w, std::mt19937_64& gen) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) total += w[i];
  double u = uniform01(gen) * total;
  int last_positive = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) last_positive = int(i);
    u -= w[i];
    if (u < 0.0) return int(i);
  }
  return last_positive;
}

}  // namespace bellfrac
