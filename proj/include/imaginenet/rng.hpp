#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace imagine {

// splitmix64; used to derive independent per-sample seeds from one root seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) {
  return mix_seed(a ^ (mix_seed(b) + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

// mt19937_64 with hand-rolled samplers. The std:: distribution objects are
// implementation-defined, so frozen test values would not survive a stdlib
// switch; these produce the same stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller without the cached spare, so call count stays predictable.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // index in [0, n)
  std::size_t index(std::size_t n) {
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return static_cast<std::size_t>(v % n);
  }

  // Flat Dirichlet via normalized Exp(1) draws; k = 1 gives {1}.
  std::vector<double> dirichlet_flat(std::size_t k) {
    std::vector<double> w(k);
    double sum = 0.0;
    for (auto& wi : w) {
      double u = uniform01();
      while (u <= 0.0) u = uniform01();
      wi = -std::log(u);
      sum += wi;
    }
    for (auto& wi : w) wi /= sum;
    return w;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace imagine
