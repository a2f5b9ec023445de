#include "specdiff/concentration.hpp"

#include <cmath>

namespace specdiff {

namespace {

// smallest kappa in {1, 2, ..., 2^10} dominating the empirical tail on the
// whole r-grid; 0 when none does
double fit_kappa(const std::vector<double>& empirical,
                 const std::vector<double>& shape) {
  for (int p = 0; p <= 10; ++p) {
    const double kappa = std::pow(2.0, p);
    bool ok = true;
    for (size_t i = 0; i < empirical.size() && ok; ++i)
      ok = empirical[i] <= kappa * std::exp(-shape[i] / kappa);
    if (ok) return kappa;
  }
  return 0.0;
}

TailTable tabulate(std::vector<double> Z, long n, double l2mu_sq, double sup,
                   double rho, double var_mu_f) {
  TailTable t;
  const int R = static_cast<int>(Z.size());
  double mean = 0.0, var = 0.0;
  for (double z : Z) mean += z;
  mean /= R;
  for (double z : Z) var += (z - mean) * (z - mean);
  var /= R;
  t.sd_Z = std::sqrt(var);
  t.var_Z_over_n = var / n;
  t.var_bound = (1.0 + rho) / (1.0 - rho) * var_mu_f;

  if (t.sd_Z == 0.0) {  // degenerate Z (constant f)
    t.kappa_fit = 1.0;
    return t;
  }
  const double r_lo = 0.5 * t.sd_Z, r_hi = 8.0 * t.sd_Z;
  const int points = 20;
  for (int i = 0; i < points; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, i / (points - 1.0));
    t.r_grid.push_back(r);
    long count = 0;
    for (double z : Z)
      if (std::fabs(z) > r) ++count;
    t.empirical_tail.push_back(static_cast<double>(count) / R);
    const double quad = r * r / (n * l2mu_sq);
    const double lin = r / (std::log(static_cast<double>(n)) * sup);
    t.bound_shape.push_back(std::min(quad, lin));
  }
  t.kappa_fit = fit_kappa(t.empirical_tail, t.bound_shape);
  return t;
}

}  // namespace

TailTable bernstein_experiment(const TransitionKernel& kernel, const GridFn& mu,
                               double rho, const GridFn& f, long n, int R,
                               uint64_t seed, std::optional<double> x0) {
  if (R < 100) throw std::invalid_argument("bernstein_experiment: need R >= 100");
  const double Ef = quadrature(f * mu);
  const GridFn f2 = f * f;
  const double l2mu_sq = quadrature(f2 * mu);
  const double var_mu_f = l2mu_sq - Ef * Ef;
  const double sup = sup_norm(f);

  std::vector<double> Z(R, 0.0);
  for (int r = 0; r < R; ++r) {
    auto rng = make_rng(seed, r);
    const SamplePath path = sample_chain(kernel, mu, n - 1, rng, x0);
    double z = 0.0;
    for (long j = 0; j < n; ++j) z += f.eval(path.values[j]) - Ef;
    Z[r] = z;
  }
  return tabulate(std::move(Z), n, l2mu_sq > 0 ? l2mu_sq : 1.0,
                  sup > 0 ? sup : 1.0, rho, var_mu_f);
}

TailTable bivariate_experiment(const TransitionKernel& kernel, const GridFn& mu,
                               double rho, const BivariateFn& f2, long n, int R,
                               uint64_t seed, std::optional<double> x0) {
  if (R < 100) throw std::invalid_argument("bivariate_experiment: need R >= 100");
  const Grid grid = kernel.grid();
  const int M = grid.size();
  const double h = grid.spacing();

  // E_{mu2} f2 and ||f2||^2_{L2(mu2)} by double quadrature against mu(x) p(x,y)
  double Ef = 0.0, l2 = 0.0, sup = 0.0;
  for (int i = 0; i < M; ++i) {
    const double wi = ((i == 0 || i == M - 1) ? 0.5 : 1.0) * mu[i] * h;
    for (int j = 0; j < M; ++j) {
      const double wj = ((j == 0 || j == M - 1) ? 0.5 : 1.0) * h;
      const double v = f2(grid.point(i), grid.point(j));
      const double mass = wi * wj * kernel.densities()(i, j);
      Ef += mass * v;
      l2 += mass * v * v;
      sup = std::max(sup, std::fabs(v));
    }
  }
  const double var_mu2 = l2 - Ef * Ef;

  std::vector<double> Z(R, 0.0);
  for (int r = 0; r < R; ++r) {
    auto rng = make_rng(seed, r);
    const SamplePath path = sample_chain(kernel, mu, n, rng, x0);
    double z = 0.0;
    for (long j = 0; j < n; ++j)
      z += f2(path.values[j], path.values[j + 1]) - Ef;
    Z[r] = z;
  }
  return tabulate(std::move(Z), n, l2 > 0 ? l2 : 1.0, sup > 0 ? sup : 1.0, rho,
                  var_mu2);
}

SupExperiment empirical_sup_experiment(const TransitionKernel& kernel,
                                       const GridFn& mu, const WaveletBasis& basis,
                                       int J, long n, int R, uint64_t seed) {
  SupExperiment out;
  const auto indices = basis.indices_upto(J);
  out.dim = static_cast<int>(indices.size());

  // class bounds over the unit ball of V_J:
  // sup_f ||f||^2_{L2(mu)} <= ||mu||_inf, sup_f ||f||_inf = sup_x sqrt(K_J(x,x))
  double kj_sup = 0.0;
  const Grid grid = basis.grid();
  for (int i = 0; i < grid.size(); ++i) {
    double s = 0.0;
    for (const auto& idx : indices) {
      const double v = basis.fn(idx.level, idx.shift)[i];
      s += v * v;
    }
    kj_sup = std::max(kj_sup, s);
  }
  out.V2 = static_cast<double>(n) * mu.max_value();        // per unit kappa
  out.U = std::log(static_cast<double>(n)) * std::sqrt(kj_sup);

  std::vector<double> Emu(indices.size());
  for (size_t a = 0; a < indices.size(); ++a)
    Emu[a] = quadrature(basis.fn(indices[a].level, indices[a].shift) * mu);

  out.sup_values.resize(R);
  for (int r = 0; r < R; ++r) {
    auto rng = make_rng(seed, r);
    const SamplePath path = sample_chain(kernel, mu, n - 1, rng);
    double norm_sq = 0.0;
    for (size_t a = 0; a < indices.size(); ++a) {
      const GridFn& fn = basis.fn(indices[a].level, indices[a].shift);
      double s = 0.0;
      for (long j = 0; j < n; ++j) s += fn.eval(path.values[j]) - Emu[a];
      norm_sq += s * s;
    }
    out.sup_values[r] = std::sqrt(norm_sq);
  }

  out.x_grid = {0.0, 1.0, 2.0, 4.0};
  const double tilde_kappa = 18.0;
  for (int p = 0; p <= 10; ++p) {
    const double kappa = std::pow(2.0, p);
    std::vector<double> emp, bnd;
    bool ok = true;
    for (double x : out.x_grid) {
      const double thr = tilde_kappa * (std::sqrt(kappa * out.V2 * (out.dim + x)) +
                                        kappa * out.U * (out.dim + x));
      long count = 0;
      for (double s : out.sup_values)
        if (s >= thr) ++count;
      const double frac = static_cast<double>(count) / R;
      emp.push_back(frac);
      bnd.push_back(2.0 * kappa * std::exp(-x));
      if (frac > 2.0 * kappa * std::exp(-x)) ok = false;
    }
    if (ok) {
      out.kappa_fit = kappa;
      out.empirical = std::move(emp);
      out.bound = std::move(bnd);
      break;
    }
  }
  return out;
}

double spectral_gap(const GeneratorMatrix& L, double delta) {
  return spectral_pair(L, delta).first;
}

}  // namespace specdiff
