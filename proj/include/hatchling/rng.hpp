#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hatchling {

/// Deterministic sampling stream used for every stochastic draw in the
/// simulator. The algorithm is pinned so that a seed reproduces the same
/// stream on every run:
///   * engine: std::mt19937_64 seeded with a single 64-bit value (the
///     initialization sequence is fully specified by the standard),
///   * uniform01: top 53 bits of one engine word, mapped to [0, 1),
///   * normal: Box-Muller, cosine branch only, consuming exactly two engine
///     words per draw (u1 in (0,1] for the log, u2 in [0,1) for the angle),
///   * bernoulli(p): uniform01() < p, one engine word.
/// No draw shares state with any other generator; each trial owns one stream.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Normal draw via Box-Muller (cosine branch). Two engine words per call.
  double normal(double mean, double stddev) {
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double z =
        std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + stddev * z;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive per-config and per-trial seeds from a
/// master seed so that results are independent of execution order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// FNV-1a over a byte string; mixes suite names into seed derivation.
inline std::uint64_t fnv1a(const char* s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (; *s; ++s) {
    h ^= static_cast<unsigned char>(*s);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Seed for trial `trial_index` of config `config_index` under `master`.
inline std::uint64_t derive_trial_seed(std::uint64_t master,
                                       std::uint64_t config_index,
                                       std::uint64_t trial_index) {
  const std::uint64_t c = splitmix64(master ^ (0x9E3779B97F4A7C15ull *
                                               (config_index + 1)));
  return splitmix64(c ^ (0xD1B54A32D192ED03ull * (trial_index + 1)));
}

}  // namespace hatchling
