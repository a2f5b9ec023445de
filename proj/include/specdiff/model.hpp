#pragma once

#include <map>
#include <string>

#include "specdiff/gridfn.hpp"
#include "specdiff/wavelets.hpp"

namespace specdiff {

/// Validated (sigma^2, b) pair with derived invariant density mu and
/// normalizer G.
struct DiffusionParams {
  GridFn sigma2;
  GridFn b;
  GridFn mu;
  double G = 0.0;

  static DiffusionParams make(GridFn sigma2, GridFn b);
};

/// mu(x) = exp(int_0^x 2b/sigma^2) / (G sigma^2(x)), G the normalizer.
/// Throws if sigma^2 is not strictly positive.
std::pair<GridFn, double> invariant_density(const GridFn& sigma2, const GridFn& b);

/// b = ((sigma^2)' + sigma^2 H') / 2 for H the log-invariant-density series.
GridFn drift_from_mu(const GridFn& sigma2, const GridFn& log_mu_series);

struct ThetaReport {
  bool in_theta = false;
  bool in_theta_s = false;
  std::map<std::string, double> sup_bounds;  // b, b', sigma, sigma', sigma''
  double sobolev_sigma = 0.0;                // ||sigma||_{H^s}
  double sobolev_b = 0.0;                    // ||b||_{H^{s-1}}
  double d_observed = 0.0;                   // inf sigma^2
  double d_used = 0.0;
  double D_used = 0.0;
};

/// Grid norms for the class constraints; Sobolev norms via truncated
/// wavelet sums. Never throws on failure, reports booleans only.
ThetaReport validate_theta(const DiffusionParams& p, double d, double D, double s,
                           const WaveletBasis& basis);

}  // namespace specdiff
