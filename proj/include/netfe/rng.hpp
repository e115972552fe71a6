#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace netfe {

/// Counter-based PRNG: SplitMix64 run in counter mode.
///
/// The n-th draw of a stream is a pure function of (seed, stream, n), so any
/// replication or column of a parallel computation can be assigned its own
/// stream and replayed independently of scheduling. Generator name recorded
/// in report metadata as "splitmix64-counter".
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(derive_key(seed, stream)) {}

  /// Independent substream of this generator (stable under nesting).
  CounterRng substream(std::uint64_t stream) const {
    return CounterRng(key_, stream ^ 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t next_u64() { return mix(key_ + (counter_++) * kGamma); }

  /// Uniform on [0,1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + uniform() * (b - a); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Integer in [0, n), by rejection to avoid modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  /// Standard normal via Box-Muller; second value cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  static constexpr const char* name() { return "splitmix64-counter"; }

private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    return mix(mix(seed) ^ mix(stream * kGamma + 0x2545f4914f6cdd1dULL));
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace netfe
