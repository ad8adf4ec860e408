#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace gibo {

/// Counter-based pseudorandom generator (SplitMix64). The state advances by a
/// fixed odd increment and every output is a bijective mix of the state, so
/// draw i is a pure function of (seed, i). The algorithm is pinned here so that
/// seeded runs reproduce across platforms and language reimplementations.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform_double(SplitMix64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi).
inline double uniform_in(SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_double(rng);
}

/// Standard normal draw via Box-Muller. Always consumes exactly two uniform
/// draws so the stream layout is independent of call history.
inline double normal_double(SplitMix64& rng) {
  // First uniform mapped into (0, 1] to keep the log finite.
  double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
  double u2 = uniform_double(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline Eigen::VectorXd normal_vector(SplitMix64& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal_double(rng);
  return v;
}

inline Eigen::VectorXd uniform_vector(SplitMix64& rng, Eigen::Index n, double lo,
                                      double hi) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform_in(rng, lo, hi);
  return v;
}

/// Derives an independent child seed from a master seed and an integer path
/// (e.g. {experiment tag, dimension, trial, optimizer}). Pure mixing, order
/// sensitive, no shared state between distinct paths.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(master + 0x9e3779b97f4a7c15ULL);
  for (std::uint64_t x : path) {
    h = mix(h ^ (x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
  }
  return h;
}

}  // namespace gibo
