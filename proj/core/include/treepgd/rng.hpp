#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace treepgd {

// splitmix64 finalizer, used to derive independent streams from a base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seedable generator wrapping std::mt19937_64 with hand-rolled variate
// transforms. std::uniform_*_distribution and std::normal_distribution are
// implementation-defined, so they are not used here: every draw below is
// fully determined by the engine's standard-specified output stream.
//
// Stream-splitting rule: Rng::stream(seed, {a, b, c}) seeds the engine with
// splitmix64 folded over (seed, a, b, c). Distinct id tuples give
// independent streams for the same base seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t id : ids) h = splitmix64(h ^ id);
    return Rng(h);
  }

  std::uint64_t next() { return engine_(); }

  // Uniform index in [0, n). Modulo bias is < 2^-40 for any n used here.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(next() % static_cast<std::uint64_t>(n));
  }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the spare deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace treepgd
