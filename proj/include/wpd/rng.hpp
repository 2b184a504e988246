#pragma once

#include <cmath>
#include <cstdint>

namespace wpd {

/// Counter-derived per-shot random stream (xoshiro256** seeded through
/// splitmix64 from the run seed and the shot index).  Because every shot owns
/// its stream, histograms are bit-identical regardless of how shots are
/// partitioned across workers.
class ShotRng {
 public:
  ShotRng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (stream * 0x9E3779B97F4A7C15ull);
    for (auto& word : state_) {
      x += 0x9E3779B97F4A7C15ull;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() {
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  int below(int n) { return int(uniform() * n); }

  bool bernoulli(double p) { return uniform() < p; }

  int binomial(int n, double p) {
    int k = 0;
    for (int i = 0; i < n; ++i) k += bernoulli(p);
    return k;
  }

  /// Knuth's product method; intended for the small means used here.
  int poisson(double lambda) {
    const double limit = std::exp(-lambda);
    int k = 0;
    double product = 1.0;
    for (;;) {
      product *= uniform();
      if (product <= limit) return k;
      ++k;
    }
  }

  /// Standard normal via Marsaglia's polar method (no cached spare).
  double normal() {
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) {
        return u * std::sqrt(-2.0 * std::log(s) / s);
      }
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace wpd
