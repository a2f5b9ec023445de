#pragma once

#include <Eigen/Dense>

#include "specdiff/simulate.hpp"
#include "specdiff/wavelets.hpp"

namespace specdiff {

/// Symmetrized empirical transition and Gram matrices over V_J.
struct EmpiricalMatrices {
  int J = 0;
  std::vector<WaveletIndex> indices;
  Eigen::MatrixXd P_hat;
  Eigen::MatrixXd G_hat;
};

EmpiricalMatrices empirical_matrices(const SamplePath& path,
                                     const WaveletBasis& basis, int J);

/// Projection-kernel density estimate on V_{J_bar}.
GridFn empirical_density(const SamplePath& path, const WaveletBasis& basis,
                         int J_bar);

struct SpectralDiagnostics {
  double gram_condition = 0.0;
  double eigen_gap = 0.0;
  int clamp_hits_sigma2 = 0;
  int clamp_hits_b = 0;
};

/// Full estimate bundle built by run_spectral_estimator.
struct SpectralEstimate {
  double kappa1_hat = 0.0;
  GridFn u1_hat;
  GridFn u1_deriv;
  GridFn u1_second;
  GridFn mu_hat;
  GridFn sigma2_hat;
  GridFn b_hat;
  int J = 0, J_bar = 0;
  SpectralDiagnostics diag;
};

/// kappa1_hat and the coefficient vector of u1_hat from the generalized
/// eigenproblem P_hat v = kappa G_hat v, u1 normalized by v^T G v = 1.
/// Throws on ill-conditioned G_hat or a degenerate eigenvalue gap.
std::pair<double, Eigen::VectorXd> spectral_eigenpair(const EmpiricalMatrices& em,
                                                      SpectralDiagnostics* diag = nullptr);

/// sigma2_hat(x) = 2 log(kappa1)/Delta * int_0^x u1 mu / (u1'(x) mu(x)) on
/// [A,B], clamped to [d/2, 4D^2]; constant extension outside [A,B].
/// Throws when |u1'| or mu fall below the denominator floor on [A,B].
GridFn estimate_sigma2(const SpectralEstimate& se, double delta, double A, double B,
                       double d, double D, int* clamp_hits = nullptr);

/// b_hat(x) = log(kappa1)/Delta * (u1 u1' mu - u1'' int_0^x u1 mu) / (u1'^2 mu)
/// on [A,B], clamped to [-2D, 2D].
GridFn estimate_drift(const SpectralEstimate& se, double delta, double A, double B,
                      double D, int* clamp_hits = nullptr);

struct EstimatorConfig {
  double delta = 0.1;
  double s = 2.0;
  double A = 0.1, B = 0.9;
  double d = 0.25, D = 10.0;
  double c_J = 1.0;      // 2^J ~ c_J n^{1/(2s+3)}
  double c_Jbar = 1.0;   // 2^Jbar ~ c_Jbar n^{1/(2s+1)}
  int J_override = -1;   // >= J0-1 forces the level
  int Jbar_override = -1;
};

int level_for_estimation(long n, double s, double c, double exponent_den,
                         const WaveletBasis& basis);

SpectralEstimate run_spectral_estimator(const SamplePath& path,
                                        const WaveletBasis& basis,
                                        const EstimatorConfig& cfg);

/// d_n = n^{-1} eps^{-2} ||sigma^2 - sigma0^2||_{L^2([A,B])}
///     + n^{-2} eps^{-4} ||b - b0||_{L^2([A,B])}
double separation_dn(const GridFn& sigma2, const GridFn& b, const GridFn& sigma2_0,
                     const GridFn& b_0, long n, double eps_n, double A, double B);

/// Psi_n = 1 iff d_n(estimate, truth) >= L' eps_n.
bool plugin_test(const SpectralEstimate& estimate, const DiffusionParams& truth,
                 double L_prime, double eps_n, long n, double A, double B);

}  // namespace specdiff
