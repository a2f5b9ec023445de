#include "specdiff/model.hpp"

#include <cmath>

namespace specdiff {

DiffusionParams DiffusionParams::make(GridFn sigma2, GridFn b) {
  if (!(sigma2.grid() == b.grid()))
    throw std::invalid_argument("DiffusionParams: grid mismatch");
  auto [mu, G] = invariant_density(sigma2, b);
  return DiffusionParams{std::move(sigma2), std::move(b), std::move(mu), G};
}

std::pair<GridFn, double> invariant_density(const GridFn& sigma2, const GridFn& b) {
  if (sigma2.min_value() <= 0.0)
    throw std::invalid_argument("invariant_density: sigma^2 must be positive");
  const Grid grid = sigma2.grid();
  std::vector<double> ratio(grid.size());
  for (int i = 0; i < grid.size(); ++i) ratio[i] = 2.0 * b[i] / sigma2[i];
  const GridFn I = cumulative(GridFn(grid, std::move(ratio)));
  std::vector<double> w(grid.size());
  for (int i = 0; i < grid.size(); ++i) w[i] = std::exp(I[i]) / sigma2[i];
  GridFn unnorm(grid, std::move(w));
  const double G = quadrature(unnorm);
  return {(1.0 / G) * unnorm, G};
}

GridFn drift_from_mu(const GridFn& sigma2, const GridFn& log_mu_series) {
  const GridFn ds2 = derivative(sigma2);
  const GridFn dH = derivative(log_mu_series);
  std::vector<double> v(sigma2.size());
  for (int i = 0; i < sigma2.size(); ++i)
    v[i] = 0.5 * (ds2[i] + sigma2[i] * dH[i]);
  return GridFn(sigma2.grid(), std::move(v));
}

ThetaReport validate_theta(const DiffusionParams& p, double d, double D, double s,
                           const WaveletBasis& basis) {
  ThetaReport r;
  r.d_used = d;
  r.D_used = D;

  const GridFn sigma = p.sigma2.map([](double v) { return std::sqrt(v); });
  const GridFn db = derivative(p.b);
  const GridFn dsigma = derivative(sigma);
  const GridFn ddsigma = derivative(dsigma);

  r.sup_bounds["b"] = sup_norm(p.b);
  r.sup_bounds["b'"] = sup_norm(db);
  r.sup_bounds["sigma"] = sup_norm(sigma);
  r.sup_bounds["sigma'"] = sup_norm(dsigma);
  r.sup_bounds["sigma''"] = sup_norm(ddsigma);
  r.d_observed = p.sigma2.min_value();

  const double tol = 1e-6;
  const int last = p.b.size() - 1;
  const bool boundary_ok = std::fabs(p.b[0]) < tol && std::fabs(p.b[last]) < tol &&
                           std::fabs(dsigma[0]) < tol && std::fabs(dsigma[last]) < tol;
  double max_sup = 0.0;
  for (const auto& [k, v] : r.sup_bounds) max_sup = std::max(max_sup, v);
  r.in_theta = boundary_ok && max_sup <= D && r.d_observed >= d;

  r.sobolev_sigma = sobolev_norm(sigma, s, basis);
  r.sobolev_b = sobolev_norm(p.b, s - 1.0, basis);
  r.in_theta_s = r.in_theta && r.sobolev_sigma <= D && r.sobolev_b <= D;
  return r;
}

}  // namespace specdiff
