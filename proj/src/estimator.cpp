#include "specdiff/estimator.hpp"

#include <cmath>

namespace specdiff {

namespace {
constexpr double kDenomFloor = 1e-3;
constexpr double kCondMax = 1e8;
constexpr double kGapMin = 1e-10;
}  // namespace

EmpiricalMatrices empirical_matrices(const SamplePath& path,
                                     const WaveletBasis& basis, int J) {
  if (path.values.size() < 2)
    throw std::invalid_argument("empirical_matrices: path too short");
  EmpiricalMatrices em;
  em.J = J;
  em.indices = basis.indices_upto(J);
  const int dim = static_cast<int>(em.indices.size());
  const long n = path.n();

  // tabulate psi_lambda at the sample states once
  Eigen::MatrixXd psi(dim, n + 1);
  for (int a = 0; a < dim; ++a) {
    const GridFn& f = basis.fn(em.indices[a].level, em.indices[a].shift);
    for (long l = 0; l <= n; ++l) psi(a, l) = f.eval(path.values[l]);
  }

  em.P_hat = Eigen::MatrixXd::Zero(dim, dim);
  for (long l = 1; l <= n; ++l)
    em.P_hat += psi.col(l - 1) * psi.col(l).transpose();
  em.P_hat = (em.P_hat + em.P_hat.transpose()).eval() / (2.0 * n);

  em.G_hat = 0.5 * (psi.col(0) * psi.col(0).transpose() +
                    psi.col(n) * psi.col(n).transpose());
  for (long l = 1; l <= n - 1; ++l)
    em.G_hat += psi.col(l) * psi.col(l).transpose();
  em.G_hat /= static_cast<double>(n);
  em.G_hat = (0.5 * (em.G_hat + em.G_hat.transpose())).eval();
  return em;
}

GridFn empirical_density(const SamplePath& path, const WaveletBasis& basis,
                         int J_bar) {
  const auto indices = basis.indices_upto(J_bar);
  const long n = path.n();
  GridFn out = GridFn::constant(basis.grid(), 0.0);
  for (const auto& idx : indices) {
    const GridFn& f = basis.fn(idx.level, idx.shift);
    double c = 0.0;
    for (long l = 0; l <= n; ++l) c += f.eval(path.values[l]);
    out += (c / static_cast<double>(n + 1)) * f;
  }
  return out;
}

std::pair<double, Eigen::VectorXd> spectral_eigenpair(const EmpiricalMatrices& em,
                                                      SpectralDiagnostics* diag) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(em.G_hat);
  const double gmin = gs.eigenvalues().minCoeff();
  const double gmax = gs.eigenvalues().maxCoeff();
  const double cond = (gmin > 0.0) ? gmax / gmin
                                   : std::numeric_limits<double>::infinity();
  if (diag) diag->gram_condition = cond;
  if (!(gmin > 0.0) || cond > kCondMax)
    throw std::runtime_error(
        "spectral_eigenpair: Gram matrix ill-conditioned (insufficient data for level J)");

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(em.P_hat, em.G_hat);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_eigenpair: eigensolve failed");
  const int dim = static_cast<int>(es.eigenvalues().size());
  if (dim < 3)
    throw std::runtime_error("spectral_eigenpair: projection space too small");

  // ascending order: top = dim-1, second = dim-2
  const double kappa1 = es.eigenvalues()[dim - 2];
  const double gap = std::min(es.eigenvalues()[dim - 1] - es.eigenvalues()[dim - 2],
                              es.eigenvalues()[dim - 2] - es.eigenvalues()[dim - 3]);
  if (diag) diag->eigen_gap = gap;
  if (gap < kGapMin)
    throw std::runtime_error("spectral_eigenpair: degenerate eigenvalue gap");

  Eigen::VectorXd v = es.eigenvectors().col(dim - 2);  // v^T G v = 1
  return {kappa1, v};
}

namespace {

GridFn synthesize_coeffs(const Eigen::VectorXd& v,
                         const std::vector<WaveletIndex>& indices,
                         const WaveletBasis& basis) {
  GridFn out = GridFn::constant(basis.grid(), 0.0);
  for (size_t a = 0; a < indices.size(); ++a)
    out += v[static_cast<int>(a)] * basis.fn(indices[a].level, indices[a].shift);
  return out;
}

}  // namespace

int level_for_estimation(long n, double s, double c, double exponent_den,
                         const WaveletBasis& basis) {
  const double target = c * std::pow(static_cast<double>(n), 1.0 / exponent_den);
  int J = static_cast<int>(std::llround(std::log2(std::max(target, 2.0))));
  J = std::max(J, basis.coarsest_level() - 1);
  J = std::min(J, basis.finest_level());
  return J;
}

SpectralEstimate run_spectral_estimator(const SamplePath& path,
                                        const WaveletBasis& basis,
                                        const EstimatorConfig& cfg) {
  SpectralEstimate se;
  se.J = cfg.J_override >= basis.coarsest_level() - 1
             ? cfg.J_override
             : level_for_estimation(path.n(), cfg.s, cfg.c_J, 2.0 * cfg.s + 3.0, basis);
  se.J_bar = cfg.Jbar_override >= basis.coarsest_level() - 1
                 ? cfg.Jbar_override
                 : level_for_estimation(path.n(), cfg.s, cfg.c_Jbar,
                                        2.0 * cfg.s + 1.0, basis);

  const auto em = empirical_matrices(path, basis, se.J);
  auto [kappa1, v] = spectral_eigenpair(em, &se.diag);
  se.kappa1_hat = kappa1;

  se.u1_hat = synthesize_coeffs(v, em.indices, basis);
  // decreasing sign convention
  const int mid = se.u1_hat.size() / 2;
  double slope = se.u1_hat[mid + 1] - se.u1_hat[mid - 1];
  if (slope == 0.0) slope = se.u1_hat[se.u1_hat.size() - 1] - se.u1_hat[0];
  if (slope > 0.0) se.u1_hat *= -1.0;

  se.u1_deriv = derivative(se.u1_hat);
  se.u1_second = derivative(se.u1_deriv);
  se.mu_hat = empirical_density(path, basis, se.J_bar);

  se.sigma2_hat = estimate_sigma2(se, cfg.delta, cfg.A, cfg.B, cfg.d, cfg.D,
                                  &se.diag.clamp_hits_sigma2);
  se.b_hat = estimate_drift(se, cfg.delta, cfg.A, cfg.B, cfg.D,
                            &se.diag.clamp_hits_b);
  return se;
}

namespace {

void check_denominators(const SpectralEstimate& se, double A, double B) {
  const auto& g = se.u1_hat.grid();
  for (int i = 0; i < se.u1_hat.size(); ++i) {
    const double x = g.point(i);
    if (x < A || x > B) continue;
    if (std::fabs(se.u1_deriv[i]) < kDenomFloor || se.mu_hat[i] < kDenomFloor)
      throw std::runtime_error(
          "estimator: u1' or mu_hat below floor on [A,B] (eigenfunction degeneracy)");
  }
}

}  // namespace

GridFn estimate_sigma2(const SpectralEstimate& se, double delta, double A, double B,
                       double d, double D, int* clamp_hits) {
  check_denominators(se, A, B);
  const Grid grid = se.u1_hat.grid();
  const GridFn I = cumulative(se.u1_hat * se.mu_hat);
  const double lead = 2.0 * std::log(se.kappa1_hat) / delta;
  const double lo = 0.5 * d, hi = 4.0 * D * D;
  int hits = 0;
  std::vector<double> out(grid.size());
  int ia = 0, ib = grid.size() - 1;
  for (int i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i);
    if (x < A) ia = i + 1;
    if (x > B && ib == grid.size() - 1) ib = i - 1;
  }
  for (int i = ia; i <= ib; ++i) {
    double val = lead * I[i] / (se.u1_deriv[i] * se.mu_hat[i]);
    if (val < lo || val > hi) ++hits;
    out[i] = std::clamp(val, lo, hi);
  }
  for (int i = 0; i < ia; ++i) out[i] = out[ia];
  for (int i = ib + 1; i < grid.size(); ++i) out[i] = out[ib];
  if (clamp_hits) *clamp_hits = hits;
  return GridFn(grid, std::move(out));
}

GridFn estimate_drift(const SpectralEstimate& se, double delta, double A, double B,
                      double D, int* clamp_hits) {
  check_denominators(se, A, B);
  const Grid grid = se.u1_hat.grid();
  const GridFn I = cumulative(se.u1_hat * se.mu_hat);
  const double lead = std::log(se.kappa1_hat) / delta;
  const double bound = 2.0 * D;
  int hits = 0;
  std::vector<double> out(grid.size());
  int ia = 0, ib = grid.size() - 1;
  for (int i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i);
    if (x < A) ia = i + 1;
    if (x > B && ib == grid.size() - 1) ib = i - 1;
  }
  for (int i = ia; i <= ib; ++i) {
    const double num = se.u1_hat[i] * se.u1_deriv[i] * se.mu_hat[i] -
                       se.u1_second[i] * I[i];
    double val = lead * num / (se.u1_deriv[i] * se.u1_deriv[i] * se.mu_hat[i]);
    if (val < -bound || val > bound) ++hits;
    out[i] = std::clamp(val, -bound, bound);
  }
  for (int i = 0; i < ia; ++i) out[i] = out[ia];
  for (int i = ib + 1; i < grid.size(); ++i) out[i] = out[ib];
  if (clamp_hits) *clamp_hits = hits;
  return GridFn(grid, std::move(out));
}

double separation_dn(const GridFn& sigma2, const GridFn& b, const GridFn& sigma2_0,
                     const GridFn& b_0, long n, double eps_n, double A, double B) {
  if (eps_n <= 0.0) throw std::invalid_argument("separation_dn: eps_n <= 0");
  const double nn = static_cast<double>(n);
  return l2_distance(sigma2, sigma2_0, A, B) / (nn * eps_n * eps_n) +
         l2_distance(b, b_0, A, B) / (nn * nn * std::pow(eps_n, 4));
}

bool plugin_test(const SpectralEstimate& estimate, const DiffusionParams& truth,
                 double L_prime, double eps_n, long n, double A, double B) {
  const double dn = separation_dn(estimate.sigma2_hat, estimate.b_hat, truth.sigma2,
                                  truth.b, n, eps_n, A, B);
  return dn >= L_prime * eps_n;
}

}  // namespace specdiff
