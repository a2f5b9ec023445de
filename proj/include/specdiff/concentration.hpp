#pragma once

#include <functional>

#include "specdiff/simulate.hpp"
#include "specdiff/wavelets.hpp"

namespace specdiff {

/// Monte Carlo tail table for Z = sum (f(X_j) - E_mu f) against the
/// Bernstein-type bound kappa exp(-shape/kappa),
/// shape = min(r^2/(n ||f||^2_{L2(mu)}), r/(log(n) ||f||_inf)).
struct TailTable {
  std::vector<double> r_grid;
  std::vector<double> empirical_tail;
  std::vector<double> bound_shape;
  double kappa_fit = 0.0;  // smallest kappa in {1,2,...,2^10}; 0 when none fits
  double sd_Z = 0.0;
  double var_Z_over_n = 0.0;
  double var_bound = 0.0;  // (1+rho)/(1-rho) Var_mu(f)
};

TailTable bernstein_experiment(const TransitionKernel& kernel, const GridFn& mu,
                               double rho, const GridFn& f, long n, int R,
                               uint64_t seed, std::optional<double> x0 = {});

using BivariateFn = std::function<double(double, double)>;

TailTable bivariate_experiment(const TransitionKernel& kernel, const GridFn& mu,
                               double rho, const BivariateFn& f2, long n, int R,
                               uint64_t seed, std::optional<double> x0 = {});

/// Tail experiment for sup over the L^2 unit ball of V_J; the supremum per
/// replicate is the Euclidean norm of the centered coefficient-sum vector.
struct SupExperiment {
  int dim = 0;
  double V2 = 0.0, U = 0.0;  // per unit kappa
  std::vector<double> x_grid;
  std::vector<double> empirical;  // P(sup >= threshold(kappa_fit, x))
  std::vector<double> bound;      // 2 kappa_fit e^{-x}
  double kappa_fit = 0.0;
  std::vector<double> sup_values;
};

SupExperiment empirical_sup_experiment(const TransitionKernel& kernel,
                                       const GridFn& mu, const WaveletBasis& basis,
                                       int J, long n, int R, uint64_t seed);

/// rho = kappa_1 of P_Delta.
double spectral_gap(const GeneratorMatrix& L, double delta);

}  // namespace specdiff
