#include "specdiff/generator.hpp"

#include <cmath>

namespace specdiff {

namespace {

// e^{Delta lambda} factors below this (relative to the top mode) contribute
// nothing at double precision and are dropped when forming the semigroup.
constexpr double kModeFloor = 1e-15;

}  // namespace

GeneratorMatrix GeneratorMatrix::assemble(const DiffusionParams& p, Grid grid) {
  if (!(p.sigma2.grid() == grid))
    throw std::invalid_argument("assemble_generator: grid mismatch");
  const int M = grid.size();
  const double h = grid.spacing();

  GeneratorMatrix g;
  g.grid_ = grid;
  g.mu_ = p.mu;

  // lumped masses c_i = w_i mu_i h, half cells at the reflecting ends
  g.weights_.resize(M);
  for (int i = 0; i < M; ++i) {
    const double w = (i == 0 || i == M - 1) ? 0.5 : 1.0;
    g.weights_[i] = w * p.mu[i] * h;
  }

  // midpoint fluxes S_{i+1/2}, S = sigma^2 mu / 2
  Eigen::VectorXd Smid(M - 1);
  for (int i = 0; i < M - 1; ++i) {
    const double Si = 0.5 * p.sigma2[i] * p.mu[i];
    const double Sj = 0.5 * p.sigma2[i + 1] * p.mu[i + 1];
    Smid[i] = 0.5 * (Si + Sj);
  }

  // L = C^{-1} T with T symmetric tridiagonal, zero-flux at the ends
  g.tri_diag_.resize(M);
  g.tri_off_.resize(M - 1);
  for (int i = 0; i < M; ++i) {
    const double left = (i > 0) ? Smid[i - 1] : 0.0;
    const double right = (i < M - 1) ? Smid[i] : 0.0;
    g.tri_diag_[i] = -(left + right) / h;
  }
  for (int i = 0; i < M - 1; ++i) g.tri_off_[i] = Smid[i] / h;

  // symmetrized C^{-1/2} T C^{-1/2}
  Eigen::VectorXd d(M), e(M - 1);
  for (int i = 0; i < M; ++i) d[i] = g.tri_diag_[i] / g.weights_[i];
  for (int i = 0; i < M - 1; ++i)
    e[i] = g.tri_off_[i] / std::sqrt(g.weights_[i] * g.weights_[i + 1]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("assemble_generator: tridiagonal eigensolve failed");

  g.evals_ = es.eigenvalues();  // ascending
  g.efuncs_ = es.eigenvectors();
  for (int i = 0; i < M; ++i)
    g.efuncs_.row(i) /= std::sqrt(g.weights_[i]);  // u_k = C^{-1/2} q_k
  return g;
}

GridFn GeneratorMatrix::eigenfunction(int k) const {
  const int M = size();
  Eigen::VectorXd col = efuncs_.col(M - 1 - k);
  return GridFn(grid_, std::vector<double>(col.data(), col.data() + M));
}

Eigen::VectorXd GeneratorMatrix::apply(const Eigen::VectorXd& f) const {
  const int M = size();
  Eigen::VectorXd out(M);
  for (int i = 0; i < M; ++i) {
    double s = tri_diag_[i] * f[i];
    if (i > 0) s += tri_off_[i - 1] * f[i - 1];
    if (i < M - 1) s += tri_off_[i] * f[i + 1];
    out[i] = s / weights_[i];
  }
  return out;
}

GridFn GeneratorMatrix::apply(const GridFn& f) const {
  Eigen::Map<const Eigen::VectorXd> v(f.values().data(), f.size());
  Eigen::VectorXd out = apply(Eigen::VectorXd(v));
  return GridFn(grid_, std::vector<double>(out.data(), out.data() + out.size()));
}

TransitionKernel transition_kernel(const GeneratorMatrix& L, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("transition_kernel: delta <= 0");
  const int M = L.size();
  const double h = L.grid().spacing();

  // e^{Delta L} = U diag(e^{Delta lambda}) U^T C, modes below the floor dropped
  const Eigen::VectorXd& lam = L.eigenvalues_raw();
  int kept = 0;
  for (int k = 0; k < M; ++k)
    if (std::exp(delta * (lam[k] - lam[M - 1])) >= kModeFloor) ++kept;
  const Eigen::MatrixXd Uk = L.eigenvectors_raw().rightCols(kept);
  Eigen::VectorXd expv(kept);
  for (int k = 0; k < kept; ++k) expv[k] = std::exp(delta * lam[M - kept + k]);

  Eigen::MatrixXd E = Uk * expv.asDiagonal() * Uk.transpose();
  E = E * L.mu_weights().asDiagonal();

  TransitionKernel K;
  K.grid_ = L.grid();
  K.delta_ = delta;
  K.kappa1_ = std::exp(delta * L.eigenvalue(1));
  K.p_.resize(M, M);
  for (int j = 0; j < M; ++j) {
    const double wj = (j == 0 || j == M - 1) ? 0.5 : 1.0;
    K.p_.col(j) = E.col(j) / (wj * h);
  }

  // per-row trapezoid CDF, clamped monotone for inverse sampling
  K.cdf_.resize(M, M);
  for (int i = 0; i < M; ++i) {
    K.cdf_(i, 0) = 0.0;
    for (int j = 1; j < M; ++j) {
      const double inc = 0.5 * (K.p_(i, j - 1) + K.p_(i, j)) * h;
      K.cdf_(i, j) = K.cdf_(i, j - 1) + std::max(inc, 0.0);
    }
    const double total = K.cdf_(i, M - 1);
    if (total <= 0.0)
      throw std::runtime_error("transition_kernel: degenerate row mass");
    K.cdf_.row(i) /= total;
  }
  return K;
}

double TransitionKernel::density(double x, double y) const {
  const double h = grid_.spacing();
  const int M = grid_.size();
  const auto locate = [&](double t, int& idx, double& frac) {
    t = std::clamp(t, 0.0, 1.0);
    idx = std::min(static_cast<int>(t / h), M - 2);
    frac = (t - grid_.point(idx)) / h;
  };
  int i, j;
  double s, t;
  locate(x, i, s);
  locate(y, j, t);
  return (1 - s) * ((1 - t) * p_(i, j) + t * p_(i, j + 1)) +
         s * ((1 - t) * p_(i + 1, j) + t * p_(i + 1, j + 1));
}

std::pair<double, GridFn> spectral_pair(const GeneratorMatrix& L, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("spectral_pair: delta <= 0");
  const double l1 = L.eigenvalue(1), l2 = L.eigenvalue(2);
  if (std::fabs(l1 - l2) < 1e-10)
    throw std::runtime_error("spectral_pair: lambda_1 degenerate with lambda_2");
  const double kappa1 = std::exp(delta * l1);
  GridFn u1 = L.eigenfunction(1);

  const int mid = L.size() / 2;
  double slope = u1[mid + 1] - u1[mid - 1];
  if (slope == 0.0) slope = u1[u1.size() - 1] - u1[0];
  if (slope > 0.0) u1 *= -1.0;
  return {kappa1, u1};
}

GreenKernel green_kernel(const DiffusionParams& p, const GridFn& mu0) {
  if (mu0.min_value() <= 0.0)
    throw std::invalid_argument("green_kernel: mu0 must be positive");
  const Grid grid = p.sigma2.grid();
  const int M = grid.size();
  const double h = grid.spacing();

  // E(y) = exp(-int_0^y 2b/sigma^2)
  std::vector<double> ratio(M);
  for (int i = 0; i < M; ++i) ratio[i] = 2.0 * p.b[i] / p.sigma2[i];
  const GridFn I = cumulative(GridFn(grid, std::move(ratio)));
  const GridFn E = I.map([](double v) { return std::exp(-v); });

  const GridFn C0 = cumulative(mu0);
  const double mass0 = C0[M - 1];
  std::vector<double> tail(M);
  for (int i = 0; i < M; ++i) tail[i] = mass0 - C0[i];  // int_y^1 mu0
  const GridFn TE = GridFn(grid, std::move(tail)) * E;

  const GridFn FE = cumulative(E);
  const GridFn FTE = cumulative(TE);

  GreenKernel gk;
  gk.grid_ = grid;
  gk.mu0_ = mu0;
  gk.H_.resize(M, M);
  for (int c = 0; c < M; ++c) {
    const double ratio_mu = p.mu[c] / mu0[c];
    const double tail_te = FTE[M - 1] - FTE[c];
    for (int a = 0; a < M; ++a) {
      const double seg = (a >= c) ? (FE[a] - FE[c]) : 0.0;
      gk.H_(a, c) = (seg - tail_te) * ratio_mu;
    }
  }

  // K(x,z) = 2G (H(x,z) - mu(z)/mu0(z) * int H(x,y) mu0(y) dy)
  Eigen::VectorXd qw(M);
  for (int j = 0; j < M; ++j)
    qw[j] = ((j == 0 || j == M - 1) ? 0.5 : 1.0) * mu0[j] * h;
  const Eigen::VectorXd R = gk.H_ * qw;

  gk.K_.resize(M, M);
  for (int c = 0; c < M; ++c) {
    const double ratio_mu = p.mu[c] / mu0[c];
    for (int a = 0; a < M; ++a)
      gk.K_(a, c) = 2.0 * p.G * (gk.H_(a, c) - ratio_mu * R[a]);
  }
  return gk;
}

GridFn GreenKernel::apply(const GridFn& f) const {
  const int M = grid_.size();
  const double h = grid_.spacing();
  Eigen::VectorXd fw(M);
  for (int j = 0; j < M; ++j)
    fw[j] = ((j == 0 || j == M - 1) ? 0.5 : 1.0) * f[j] * mu0_[j] * h;
  Eigen::VectorXd out = K_ * fw;
  return GridFn(grid_, std::vector<double>(out.data(), out.data() + M));
}

double hs_distance(const DiffusionParams& p, const DiffusionParams& p0) {
  if (!(p.sigma2.grid() == p0.sigma2.grid()))
    throw std::invalid_argument("hs_distance: grid mismatch");
  const GreenKernel a = green_kernel(p, p0.mu);
  const GreenKernel b = green_kernel(p0, p0.mu);
  const Grid grid = p0.sigma2.grid();
  const int M = grid.size();
  const double h = grid.spacing();
  double s = 0.0;
  for (int i = 0; i < M; ++i) {
    const double wi = ((i == 0 || i == M - 1) ? 0.5 : 1.0) * p0.mu[i] * h;
    for (int j = 0; j < M; ++j) {
      const double wj = ((j == 0 || j == M - 1) ? 0.5 : 1.0) * p0.mu[j] * h;
      const double d = a.K()(i, j) - b.K()(i, j);
      s += wi * wj * d * d;
    }
  }
  return std::sqrt(s);
}

InfoDistances info_distances(const DiffusionParams& p0, const DiffusionParams& p,
                             double delta) {
  const Grid grid = p0.sigma2.grid();
  const int M = grid.size();
  const double h = grid.spacing();
  const auto L0 = GeneratorMatrix::assemble(p0, grid);
  const auto L1 = GeneratorMatrix::assemble(p, grid);
  const auto k0 = transition_kernel(L0, delta);
  const auto k1 = transition_kernel(L1, delta);

  InfoDistances out;
  constexpr double floor = 1e-12;
  const auto safe_log_ratio = [&](double num, double den) {
    if (num <= 0.0 || den <= 0.0)
      throw std::runtime_error("info_distances: nonpositive density at node");
    if (num < floor) { num = floor; ++out.clip_count; }
    if (den < floor) { den = floor; ++out.clip_count; }
    return std::log(num / den);
  };

  double e1 = 0.0, e2 = 0.0;  // moments of log(p/p0) under mu0 p0
  for (int i = 0; i < M; ++i) {
    const double wi = ((i == 0 || i == M - 1) ? 0.5 : 1.0) * h * p0.mu[i];
    for (int j = 0; j < M; ++j) {
      const double wj = ((j == 0 || j == M - 1) ? 0.5 : 1.0) * h;
      const double mass = wi * wj * k0.densities()(i, j);
      const double g = safe_log_ratio(k1.densities()(i, j), k0.densities()(i, j));
      e1 += mass * g;
      e2 += mass * g * g;
    }
  }
  out.kl = -e1;
  out.var_log = e2 - e1 * e1;

  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < M; ++i) {
    const double wi = ((i == 0 || i == M - 1) ? 0.5 : 1.0) * h * p0.mu[i];
    const double g = safe_log_ratio(p.mu[i], p0.mu[i]);
    m1 += wi * g;
    m2 += wi * g * g;
  }
  out.kl_mu = -m1;
  out.var_log_mu = m2 - m1 * m1;
  return out;
}

double small_ball_rhs(const DiffusionParams& p0, const DiffusionParams& p,
                      const WaveletBasis& basis) {
  const GridFn inv = p.sigma2.map([](double v) { return 1.0 / v; });
  const GridFn inv0 = p0.sigma2.map([](double v) { return 1.0 / v; });
  return l2_distance(p.mu, p0.mu, 0.0, 1.0) +
         besov_dual_bound(inv - inv0, 1.0, basis) +
         besov_dual_bound(p.b - p0.b, 2.0, basis);
}

}  // namespace specdiff
