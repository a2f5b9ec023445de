#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "specdiff/generator.hpp"

namespace specdiff {

/// splitmix64; used to derive independent per-replicate streams
uint64_t mix_seed(uint64_t seed, uint64_t stream);

inline std::mt19937_64 make_rng(uint64_t seed, uint64_t stream = 0) {
  return std::mt19937_64(mix_seed(seed, stream));
}

/// Low-frequency observations X_0, X_Delta, ..., X_{n Delta}.
struct SamplePath {
  double delta = 0.0;
  std::vector<double> values;
  std::string sampler;
  uint64_t seed = 0;
  double fine_step = 0.0;  // Euler only

  long n() const { return static_cast<long>(values.size()) - 1; }
};

/// Inverse-CDF draw from the piecewise-linear trapezoid CDF of mu.
double sample_stationary(const GridFn& mu, std::mt19937_64& rng);

/// Markov chain from the surrogate kernel: X_0 ~ mu (or the fixed start
/// x0 when given), steps by inverse CDF on the row CDFs with linear
/// interpolation between grid nodes and linear row blending at off-grid
/// source states.
SamplePath sample_chain(const TransitionKernel& kernel, const GridFn& mu, long n,
                        std::mt19937_64& rng, std::optional<double> x0 = {});

/// Euler-Maruyama on the reflected extension of (b, sigma) to the real
/// line, observations folded back to [0,1] through x -> |x + 2k|.
SamplePath euler_reflected(const DiffusionParams& p, double delta, long n,
                           double fine_step, std::mt19937_64& rng);

}  // namespace specdiff
