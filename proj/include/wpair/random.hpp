#pragma once

#include <cstdint>
#include <random>

#include "wpair/core.hpp"

namespace wpair {

/// Independent deterministic stream for (seed, stream index), so parallel loops
/// reproduce regardless of scheduling.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
template <typename Rng>
cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

template <typename Rng>
Matrix ginibre(Eigen::Index n, Rng& rng) {
  Matrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = complex_gaussian(rng);
  return a;
}

}  // namespace wpair
