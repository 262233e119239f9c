#pragma once

// Deterministic random variate generation.
//
// The engine is std::mt19937_64, whose output sequence for a given seed is
// pinned by the standard.  The distributions are implemented here rather
// than taken from <random> because the standard deliberately does not pin
// the variate algorithms of std::normal_distribution and friends: libstdc++,
// libc++ and MSVC all produce different streams from the same engine state,
// which would break the documented-seed reproduction contract the moment the
// code is built with a different toolchain.
//
// Parallel runs derive one independent stream per replicate from
// (master seed, replicate index) with a splitmix64-style hash, so the values
// a replicate sees cannot depend on which thread picked it up.

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ratioest {

// One mixing step of the splitmix64 generator (Vigna's constants).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based per-replicate seed: index -> seed is injective for a fixed
// master (odd multiplier, then a bijective mix), so streams never collide.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master ^ (0x9e3779b97f4a7c15ULL * (index + 0x632be59bd9b4e019ULL));
  return splitmix64_next(state);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1), 53 random mantissa bits.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer on [0, bound) by masked rejection; unbiased for any bound.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
    for (;;) {
      const std::uint64_t r = eng_() & mask;
      if (r < bound) return r;
    }
  }

  // Standard normal via the Marsaglia polar method; the second variate of
  // each pair is cached, so draws come in a fixed per-stream order.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Unit-scale gamma variate, Marsaglia-Tsang squeeze/rejection.
  // Only shapes > 1 are needed here (the model requires shape > 2), so the
  // shape<1 boosting step is deliberately absent.
  double gamma(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Unit-mean exponential via inversion; argument of log stays in (0, 1].
  double exponential() {
    return -std::log(1.0 - uniform01());
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Overwrite the first n slots of `perm` with a uniform random n-subset of its
// contents (partial Fisher-Yates).  `perm` must hold a permutation of the
// population labels; it stays one afterwards, so callers may reuse it across
// draws without re-initialising -- the swap positions drawn below do not
// depend on the current arrangement, and a Fisher-Yates pass from any
// starting permutation yields a uniform subset.
inline void draw_srswor(Rng& rng, std::vector<std::uint32_t>& perm, std::size_t n) {
  const std::size_t N = perm.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(N - i));
    std::swap(perm[i], perm[j]);
  }
}

}  // namespace ratioest
