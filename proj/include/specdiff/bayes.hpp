#pragma once

#include <map>

#include "specdiff/estimator.hpp"
#include "specdiff/simulate.hpp"

namespace specdiff {

enum class CoeffDensity { kUniform, kTruncatedNormal };

/// Hierarchical random wavelet series prior: coefficients drawn i.i.d.
/// from a bounded density phi on [-B_tilde, B_tilde] with
/// inf_{[-B,B]} phi >= zeta; the series weights carry the smoothness.
struct PriorConfig {
  double s = 2.0;
  double B = 1.0;
  double B_tilde = 1.0;
  CoeffDensity density = CoeffDensity::kUniform;
  int vanishing_moments = 3;
  int J0 = 2;
  int Jmax = 6;
  int L_n = -1;      // truncation for log sigma^{-2}; -1 derives from n
  int L_bar_n = -1;  // truncation for H
  double A = 0.1;
  double B_int = 0.9;

  double zeta() const;
};

/// Coefficient arrays u (for log sigma^{-2}) and u_bar (for H), aligned
/// with PriorModel::u_indices()/ubar_indices().
struct CoefficientState {
  std::vector<double> u;
  std::vector<double> u_bar;
};

/// PriorConfig bound to a grid: tabulated basis, interior index set, and
/// the per-index series weights.
class PriorModel {
 public:
  PriorModel(PriorConfig cfg, Grid grid, long n_data = 0);

  const PriorConfig& config() const { return cfg_; }
  const Grid& grid() const { return grid_; }
  const WaveletBasis& basis() const { return basis_; }
  const IndexSet& interior() const { return interior_; }
  const std::vector<WaveletIndex>& u_indices() const { return u_idx_; }
  const std::vector<WaveletIndex>& ubar_indices() const { return ubar_idx_; }
  int truncation_level() const { return L_; }
  int truncation_level_bar() const { return Lbar_; }

  GridFn log_sigma2_inv(const CoefficientState& st) const;
  GridFn log_mu_series(const CoefficientState& st) const;
  DiffusionParams assemble(const CoefficientState& st) const;

  CoefficientState zero_state() const;

 private:
  PriorConfig cfg_;
  Grid grid_;
  WaveletBasis basis_;
  IndexSet interior_;
  std::vector<WaveletIndex> u_idx_, ubar_idx_;
  std::vector<double> u_w_, ubar_w_;  // 2^{-l(s+1/2)} l^{-2}, 2^{-l(s+3/2)} l^{-2}
  int L_ = 0, Lbar_ = 0;
};

std::pair<CoefficientState, DiffusionParams> sample_prior(const PriorModel& model,
                                                          std::mt19937_64& rng);

/// Sum of log phi over all coefficients; -inf outside the support box.
double log_prior_density(const CoefficientState& st, const PriorModel& model);

/// log mu(X_0) + sum log p(Delta, X_{i-1}, X_i) with bilinear density
/// interpolation; throws when a clipped density (<= 1e-12) is hit.
double log_likelihood(const DiffusionParams& p, const SamplePath& path,
                      double delta);

struct McmcConfig {
  long n_iters = 20000;        // componentwise Metropolis updates
  double proposal_scale = 0.5; // random-walk sd in coefficient (u) space
  int thin = 10;
  double burn_in = 0.2;
  int likelihood_m = 8;        // grid exponent for in-chain likelihood
  uint64_t seed = 1;
};

struct Chain {
  std::vector<CoefficientState> states;  // thinned
  std::vector<double> log_posts;
  std::map<int, double> acceptance_by_level;
  double acceptance = 0.0;
  uint64_t seed = 0;
  int thin = 1;
  long n_iters = 0;
  bool stall_warning = false;  // 1000 consecutive rejections seen
};

/// Componentwise random-walk Metropolis over the coefficient box with
/// reflection at +-B_tilde. An empty path targets the prior alone.
Chain mcmc_run(const PriorModel& model, const SamplePath& path,
               const McmcConfig& cfg);

struct PosteriorDiagnostics {
  std::vector<double> dist_sigma2;  // L^2([A,B]) distances, post burn-in
  std::vector<double> dist_b;
  double median_sigma2 = 0.0, q10_sigma2 = 0.0, q90_sigma2 = 0.0;
  double median_b = 0.0, q10_b = 0.0, q90_b = 0.0;
  double delta_n = 0.0, delta_n_prime = 0.0;
  std::vector<double> M_grid;
  std::vector<double> exceed_sigma2;  // fraction with dist > M delta_n
  std::vector<double> exceed_b;
  double ess_sigma2 = 0.0;
};

PosteriorDiagnostics posterior_diagnostics(const Chain& chain,
                                           const PriorModel& model,
                                           const DiffusionParams& truth, long n,
                                           double s, double A, double B);

}  // namespace specdiff
