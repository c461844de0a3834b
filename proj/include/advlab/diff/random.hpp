#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace advlab {

/// mt19937_64 with distribution helpers whose output does not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(mix(seed)) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed ^ mix(stream + 0x51ed2701ULL))) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi).
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) throw std::invalid_argument("Rng::integer: empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Draws an index with probability proportional to weights.
  template <typename Weights>
  int categorical(const Weights& w) {
    const auto n = static_cast<std::ptrdiff_t>(w.size());
    double total = 0;
    for (std::ptrdiff_t i = 0; i < n; ++i) total += w[i];
    double u = uniform() * total;
    int last = -1;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (w[i] <= 0) continue;
      last = static_cast<int>(i);
      if (u < w[i]) return last;
      u -= w[i];
    }
    if (last < 0) throw std::invalid_argument("Rng::categorical: no positive weight");
    return last;
  }

  template <typename Container>
  void shuffle(Container& c) {
    for (std::size_t i = c.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(i)));
      std::swap(c[i - 1], c[j]);
    }
  }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace advlab
