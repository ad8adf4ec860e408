#include "gibo/sobol.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gibo {

namespace {

constexpr int kBits = 32;

/// Primitive polynomial (bit-encoded, leading and trailing coefficient
/// included) and initial direction values m_1..m_s per dimension, Joe-Kuo
/// ordering. Dimension 1 is the van der Corput sequence and needs no entry.
struct DirectionSeed {
  std::uint32_t poly;
  std::array<std::uint32_t, 7> m;
};

constexpr DirectionSeed kSeeds[kSobolMaxDim - 1] = {
    {3u, {1}},
    {7u, {1, 3}},
    {11u, {1, 3, 1}},
    {13u, {1, 1, 1}},
    {19u, {1, 1, 3, 3}},
    {25u, {1, 3, 5, 13}},
    {37u, {1, 1, 5, 5, 17}},
    {41u, {1, 1, 5, 5, 5}},
    {47u, {1, 1, 7, 11, 19}},
    {55u, {1, 1, 5, 1, 1}},
    {59u, {1, 1, 1, 3, 11}},
    {61u, {1, 3, 5, 5, 31}},
    {67u, {1, 3, 3, 9, 7, 49}},
    {91u, {1, 1, 1, 15, 21, 21}},
    {97u, {1, 3, 1, 13, 27, 49}},
    {103u, {1, 1, 1, 15, 7, 5}},
    {109u, {1, 3, 1, 15, 13, 25}},
    {115u, {1, 1, 5, 5, 19, 61}},
    {131u, {1, 3, 7, 11, 23, 15, 103}},
    {137u, {1, 3, 7, 13, 13, 15, 69}},
    {143u, {1, 1, 3, 13, 7, 35, 63}},
    {145u, {1, 3, 5, 9, 1, 25, 53}},
    {157u, {1, 3, 1, 13, 9, 35, 107}},
    {167u, {1, 3, 1, 5, 27, 61, 31}},
    {171u, {1, 1, 5, 11, 19, 41, 61}},
    {185u, {1, 3, 5, 3, 3, 13, 69}},
    {191u, {1, 1, 7, 13, 1, 19, 1}},
    {193u, {1, 3, 7, 5, 13, 19, 59}},
    {203u, {1, 1, 3, 9, 25, 29, 41}},
    {211u, {1, 3, 5, 13, 23, 1, 55}},
    {213u, {1, 3, 7, 3, 13, 59, 17}},
    {229u, {1, 3, 1, 3, 5, 53, 69}},
    {239u, {1, 1, 5, 5, 23, 33, 13}},
    {241u, {1, 1, 7, 7, 1, 61, 123}},
    {247u, {1, 1, 7, 9, 13, 61, 49}},
};

int degree(std::uint32_t poly) {
  int s = -1;
  while (poly != 0) {
    poly >>= 1;
    ++s;
  }
  return s;
}

/// Direction integers V_1..V_kBits for one dimension (1-indexed in V[1..]).
std::vector<std::uint32_t> direction_integers(int dim_index) {
  std::vector<std::uint32_t> v(kBits + 1, 0);
  if (dim_index == 0) {
    for (int k = 1; k <= kBits; ++k) v[k] = 1u << (kBits - k);
    return v;
  }
  const DirectionSeed& seed = kSeeds[dim_index - 1];
  const int s = degree(seed.poly);
  for (int k = 1; k <= s && k <= kBits; ++k) v[k] = seed.m[k - 1] << (kBits - k);
  for (int k = s + 1; k <= kBits; ++k) {
    std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
    for (int i = 1; i < s; ++i) {
      if ((seed.poly >> (s - i)) & 1u) value ^= v[k - i];
    }
    v[k] = value;
  }
  return v;
}

}  // namespace

Eigen::MatrixXd sobol_points(int n, int d) {
  if (n < 0) throw std::invalid_argument("sobol_points: negative count");
  if (d < 1 || d > kSobolMaxDim) {
    throw std::invalid_argument("sobol_points: dimension out of range");
  }
  std::vector<std::vector<std::uint32_t>> v(d);
  for (int j = 0; j < d; ++j) v[j] = direction_integers(j);

  Eigen::MatrixXd points(n, d);
  std::vector<std::uint32_t> x(d, 0);
  for (int i = 0; i < n; ++i) {
    // Advance from sequence index i to i+1: flip the direction given by the
    // lowest zero bit of i. Index 0 (the all-zeros point) is skipped.
    std::uint32_t idx = static_cast<std::uint32_t>(i);
    int t = 1;
    while (idx & 1u) {
      idx >>= 1;
      ++t;
    }
    for (int j = 0; j < d; ++j) {
      x[j] ^= v[j][t];
      points(i, j) = static_cast<double>(x[j]) * 0x1.0p-32;
    }
  }
  return points;
}

}  // namespace gibo
