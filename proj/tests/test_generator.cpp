#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "specdiff/fixtures.hpp"
#include "specdiff/generator.hpp"

using namespace specdiff;
using std::numbers::pi;

namespace {

GridFn band_limited(Grid g, std::mt19937_64& rng, int harmonics = 5) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> a(harmonics + 1);
  for (auto& v : a) v = unif(rng);
  return GridFn::from_function(g, [a](double x) {
    double s = 0.5 * a[0];
    for (size_t k = 1; k < a.size(); ++k) s += a[k] * std::cos(k * pi * x);
    return s;
  });
}

Eigen::MatrixXd matrix_function(const Eigen::MatrixXd& A,
                                const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  Eigen::VectorXd fe = es.eigenvalues();
  for (int i = 0; i < fe.size(); ++i) fe[i] = f(fe[i]);
  return es.eigenvectors() * fe.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

TEST_CASE("Neumann spectrum of (1/2) d^2/dx^2: lambda_k = -k^2 pi^2 / 2") {
  Grid g{11};
  const auto L = GeneratorMatrix::assemble(make_trivial_truth(g), g);
  CHECK(std::fabs(L.eigenvalue(0)) < 1e-8);
  for (int k = 1; k <= 5; ++k) {
    const double target = -0.5 * k * k * pi * pi;
    CHECK(std::fabs(L.eigenvalue(k) - target) / std::fabs(target) < 1e-3);
  }
}

TEST_CASE("eigenfunction for lambda_1 is cos(pi x) up to normalization") {
  Grid g{11};
  const auto L = GeneratorMatrix::assemble(make_trivial_truth(g), g);
  GridFn u1 = L.eigenfunction(1);
  if (u1[0] < 0) u1 *= -1.0;
  const GridFn target =
      GridFn::from_function(g, [](double x) { return std::sqrt(2.0) * std::cos(pi * x); });
  CHECK(sup_norm(u1 - target) < 1e-3);
}

TEST_CASE("constant eigenvector at eigenvalue zero; L applied to constants") {
  Grid g{10};
  const auto p = make_bump_drift_truth(g);
  const auto L = GeneratorMatrix::assemble(p, g);
  CHECK(std::fabs(L.eigenvalue(0)) < 1e-8);
  const GridFn Lc = L.apply(GridFn::constant(g, 4.2));
  CHECK(sup_norm(Lc) < 1e-8);
  GridFn u0 = L.eigenfunction(0);
  CHECK(sup_norm(u0 - GridFn::constant(g, u0[0])) < 1e-8);
}

TEST_CASE("eigenfunctions orthonormal in weighted L2(mu)") {
  Grid g{8};
  const auto p = make_bump_drift_truth(g);
  const auto L = GeneratorMatrix::assemble(p, g);
  for (int a = 0; a < 5; ++a)
    for (int c = a; c < 5; ++c) {
      const GridFn ua = L.eigenfunction(a), uc = L.eigenfunction(c);
      double ip = 0.0;
      for (int i = 0; i < g.size(); ++i) ip += L.mu_weights()[i] * ua[i] * uc[i];
      CHECK(ip == doctest::Approx(a == c ? 1.0 : 0.0).epsilon(1e-8));
    }
}

TEST_CASE("nonconstant sigma^2: eigenvalues match grid-refinement oracle") {
  const GridFn s2_c = GridFn::from_function(
      Grid{9}, [](double x) { return 1.0 + 0.3 * std::cos(2 * pi * x); });
  const GridFn s2_f = GridFn::from_function(
      Grid{11}, [](double x) { return 1.0 + 0.3 * std::cos(2 * pi * x); });
  const auto Lc = GeneratorMatrix::assemble(
      DiffusionParams::make(s2_c, GridFn::constant(Grid{9}, 0.0)), Grid{9});
  const auto Lf = GeneratorMatrix::assemble(
      DiffusionParams::make(s2_f, GridFn::constant(Grid{11}, 0.0)), Grid{11});
  for (int k = 1; k <= 5; ++k)
    CHECK(std::fabs(Lc.eigenvalue(k) - Lf.eigenvalue(k)) /
              std::fabs(Lf.eigenvalue(k)) <
          1e-4);
}

TEST_CASE("transition kernel: rows integrate to one, entries nonnegative") {
  Grid g{10};
  const auto p = make_bump_drift_truth(g);
  const auto L = GeneratorMatrix::assemble(p, g);
  const auto K = transition_kernel(L, 0.1);
  const double h = g.spacing();
  CHECK(K.densities().minCoeff() > -1e-10);
  for (int i = 0; i < g.size(); i += 37) {
    double mass = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      const double w = (j == 0 || j == g.size() - 1) ? 0.5 : 1.0;
      mass += K.densities()(i, j) * w * h;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("transition density bounds are stable under grid refinement") {
  double lo[2], hi[2];
  int idx = 0;
  for (int m : {9, 10}) {
    Grid g{m};
    const auto p = make_bump_drift_truth(g);
    const auto K = transition_kernel(GeneratorMatrix::assemble(p, g), 0.1);
    lo[idx] = K.densities().minCoeff();
    hi[idx] = K.densities().maxCoeff();
    ++idx;
  }
  CHECK(lo[0] > 0.0);
  CHECK(std::fabs(lo[1] - lo[0]) / lo[0] < 0.10);
  CHECK(std::fabs(hi[1] - hi[0]) / hi[0] < 0.10);
}

TEST_CASE("reversibility: mu(x) p(x,y) = mu(y) p(y,x)") {
  Grid g{9};
  const auto p = make_bump_drift_truth(g);
  const auto K = transition_kernel(GeneratorMatrix::assemble(p, g), 0.1);
  for (int i = 0; i < g.size(); i += 41)
    for (int j = 0; j < g.size(); j += 29) {
      const double a = p.mu[i] * K.densities()(i, j);
      const double b = p.mu[j] * K.densities()(j, i);
      CHECK(std::fabs(a - b) <= 1e-6 * std::max(1.0, std::fabs(a)));
    }
}

TEST_CASE("ergodic limit: Delta = 50 rows converge to mu") {
  Grid g{9};
  const auto p = make_trivial_truth(g);
  const auto K = transition_kernel(GeneratorMatrix::assemble(p, g), 50.0);
  double err = 0.0;
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j)
      err = std::max(err, std::fabs(K.densities()(i, j) - 1.0));
  CHECK(err < 1e-6);
}

TEST_CASE("Chapman-Kolmogorov: kernel(Delta/2) squares to kernel(Delta)") {
  Grid g{9};
  const auto p = make_bump_drift_truth(g);
  const auto L = GeneratorMatrix::assemble(p, g);
  const auto K1 = transition_kernel(L, 0.05);
  const auto K2 = transition_kernel(L, 0.1);
  const int M = g.size();
  const double h = g.spacing();
  Eigen::VectorXd w(M);
  for (int j = 0; j < M; ++j) w[j] = ((j == 0 || j == M - 1) ? 0.5 : 1.0) * h;
  const Eigen::MatrixXd composed = K1.densities() * w.asDiagonal() * K1.densities();
  CHECK((composed - K2.densities()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("spectral_pair: analytic value and sign convention") {
  Grid g{10};
  const auto L = GeneratorMatrix::assemble(make_trivial_truth(g), g);
  auto [kappa1, u1] = spectral_pair(L, 0.1);
  CHECK(kappa1 == doctest::Approx(std::exp(-pi * pi / 20.0)).epsilon(1e-4));
  CHECK(u1[0] > u1[u1.size() - 1]);
  const GridFn target =
      GridFn::from_function(g, [](double x) { return std::sqrt(2.0) * std::cos(pi * x); });
  CHECK(sup_norm(u1 - target) < 1e-3);
}

TEST_CASE("spectral_pair: kappa1 stable under refinement for perturbed sigma^2") {
  double k[2];
  int idx = 0;
  for (int m : {9, 11}) {
    Grid g{m};
    const GridFn s2 = GridFn::from_function(
        g, [](double x) { return 1.0 + 0.25 * std::sin(2 * pi * x); });
    const auto L = GeneratorMatrix::assemble(
        DiffusionParams::make(s2, GridFn::constant(g, 0.0)), g);
    k[idx++] = spectral_pair(L, 0.1).first;
  }
  CHECK(std::fabs(k[0] - k[1]) < 1e-4);
}

TEST_CASE("contraction: ||P_Delta f||_{L2(mu)} <= kappa1 ||f||_{L2(mu)} on centered f") {
  Grid g{8};
  const auto p = make_bump_drift_truth(g);
  const auto L = GeneratorMatrix::assemble(p, g);
  const auto K = transition_kernel(L, 0.1);
  const double rho = K.kappa1();
  const int M = g.size();
  const double h = g.spacing();
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    GridFn f = band_limited(g, rng, 8);
    // center under mu
    double mean = quadrature(f * p.mu);
    f -= GridFn::constant(g, mean);
    Eigen::VectorXd fv(M), Pf(M);
    for (int i = 0; i < M; ++i) fv[i] = f[i];
    for (int i = 0; i < M; ++i) {
      double s = 0.0;
      for (int j = 0; j < M; ++j) {
        const double w = (j == 0 || j == M - 1) ? 0.5 : 1.0;
        s += K.densities()(i, j) * w * h * fv[j];
      }
      Pf[i] = s;
    }
    double n0 = 0.0, n1 = 0.0;
    for (int i = 0; i < M; ++i) {
      n0 += L.mu_weights()[i] * fv[i] * fv[i];
      n1 += L.mu_weights()[i] * Pf[i] * Pf[i];
    }
    CHECK(std::sqrt(n1) <= rho * std::sqrt(n0) * (1.0 + 1e-8));
  }
}

TEST_CASE("green kernel: J solves (1/2) u'' = cos(pi x) with Neumann data") {
  Grid g{10};
  const auto p = make_trivial_truth(g);
  const auto gk = green_kernel(p, p.mu);
  const GridFn f = GridFn::from_function(g, [](double x) { return std::cos(pi * x); });
  const GridFn Jf = gk.apply(f);
  const GridFn target = GridFn::from_function(
      g, [](double x) { return -2.0 / (pi * pi) * std::cos(pi * x); });
  CHECK(sup_norm(Jf - target) < 1e-3);
}

TEST_CASE("green identity: (L - mu0(L)) J f = f - int f dmu0 on two models") {
  std::mt19937_64 rng(13);
  for (int model = 0; model < 2; ++model) {
    Grid g{10};
    const auto p = model == 0 ? make_trivial_truth(g) : make_bump_drift_truth(g);
    const auto L = GeneratorMatrix::assemble(p, g);
    const auto gk = green_kernel(p, p.mu);
    for (int rep = 0; rep < 5; ++rep) {
      const GridFn f = band_limited(g, rng);
      const GridFn Jf = gk.apply(f);
      const GridFn LJf = L.apply(Jf);
      const double mu0L = quadrature(LJf * p.mu);
      const double fbar = quadrature(f * p.mu);
      GridFn lhs = LJf - GridFn::constant(g, mu0L);
      GridFn rhs = f - GridFn::constant(g, fbar);
      CHECK(sup_norm(lhs - rhs) < 1e-3);
    }
  }
}

TEST_CASE("green kernel image is mu0-mean-zero") {
  Grid g{10};
  const auto p = make_bump_drift_truth(g);
  const auto gk = green_kernel(p, p.mu);
  std::mt19937_64 rng(99);
  const GridFn f = band_limited(g, rng);
  CHECK(std::fabs(quadrature(gk.apply(f) * p.mu)) < 1e-10);
}

TEST_CASE("hs_distance: zero at equality, O(t) along a perturbation family") {
  Grid g{9};
  const auto basis = WaveletBasis::build(3, 2, 6, g);
  const auto p0 = make_trivial_truth(g);
  CHECK(hs_distance(p0, p0) == 0.0);

  const GridFn psi = basis.fn(3, 2);
  std::vector<double> ratio;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const GridFn s2 = (t * psi).map([](double v) { return std::exp(v); });
    const auto p = DiffusionParams::make(s2, GridFn::constant(g, 0.0));
    ratio.push_back(hs_distance(p, p0) / t);
  }
  CHECK(std::fabs(ratio[1] - ratio[0]) / ratio[0] < 0.10);
  CHECK(std::fabs(ratio[2] - ratio[1]) / ratio[1] < 0.10);
}

TEST_CASE("hs_distance asymmetry is bounded by the density-ratio bound") {
  Grid g{9};
  const auto p0 = make_trivial_truth(g);
  const auto p1 = make_bump_drift_truth(g, 0.4);
  const double d01 = hs_distance(p1, p0);
  const double d10 = hs_distance(p0, p1);
  CHECK(d01 > 0.0);
  // both orders comparable: ratio bounded by sup(mu0/mu1)*sup(mu1/mu0)
  double r01 = 0.0, r10 = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    r01 = std::max(r01, p0.mu[i] / p1.mu[i]);
    r10 = std::max(r10, p1.mu[i] / p0.mu[i]);
  }
  const double bound = r01 * r10;
  CHECK(d01 / d10 < bound);
  CHECK(d10 / d01 < bound);
}

TEST_CASE("info distances: zero at equality, nonnegative on random pairs") {
  Grid g{8};
  const auto p0 = make_trivial_truth(g);
  const auto same = info_distances(p0, p0, 0.1);
  CHECK(std::fabs(same.kl) < 1e-10);
  CHECK(std::fabs(same.var_log) < 1e-10);
  CHECK(std::fabs(same.kl_mu) < 1e-10);
  CHECK(std::fabs(same.var_log_mu) < 1e-10);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-0.3, 0.3);
  for (int rep = 0; rep < 20; ++rep) {
    const double a = unif(rng), c = unif(rng);
    const GridFn s2 = GridFn::from_function(
        g, [&](double x) { return std::exp(a * std::cos(2 * pi * x) * 0.5); });
    const GridFn H = GridFn::from_function(
        g, [&](double x) { return c * std::sin(2 * pi * x) * 0.3; });
    const GridFn b = drift_from_mu(s2, H);
    const auto p = DiffusionParams::make(s2, b);
    const auto d = info_distances(p0, p, 0.1);
    CHECK(d.kl >= -1e-12);
    CHECK(d.kl_mu >= -1e-12);
  }
}

TEST_CASE("small ball terms: zero at equality; sigma term vanishes for b-only change") {
  Grid g{10};
  const auto basis = WaveletBasis::build(6, 2, 5, g);
  const auto p0 = make_trivial_truth(g);
  CHECK(small_ball_rhs(p0, p0, basis) == 0.0);

  const auto p1 = make_bump_drift_truth(g, 0.4);
  const GridFn inv1 = p1.sigma2.map([](double v) { return 1.0 / v; });
  const GridFn inv0 = p0.sigma2.map([](double v) { return 1.0 / v; });
  CHECK(besov_dual_bound(inv1 - inv0, 1.0, basis) == 0.0);
  CHECK(l2_distance(p1.mu, p0.mu, 0.0, 1.0) > 0.0);
  CHECK(small_ball_rhs(p0, p1, basis) > 0.0);
}

TEST_CASE("KL is dominated by a constant multiple of small_ball_rhs^2 along the family") {
  Grid g{9};
  const auto basis = WaveletBasis::build(3, 2, 6, g);
  const auto p0 = make_trivial_truth(g);
  const GridFn psi = basis.fn(3, 2);
  std::vector<double> ratio;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const GridFn s2 = (t * psi).map([](double v) { return std::exp(v); });
    const auto p = DiffusionParams::make(s2, GridFn::constant(g, 0.0));
    const auto d = info_distances(p0, p, 0.1);
    const double rhs = small_ball_rhs(p0, p, basis);
    ratio.push_back(d.kl / (rhs * rhs));
  }
  const double mx = std::max({ratio[0], ratio[1], ratio[2]});
  const double mn = std::min({ratio[0], ratio[1], ratio[2]});
  CHECK((mx - mn) / mx < 0.5);
}

TEST_CASE("HS Lipschitz functional calculus for e^{Delta/z} on inverses") {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> spec(-3.0, -0.3);
  const double delta = 0.1;
  const double c1 = 0.3, c2 = 3.0;

  // analytic Lipschitz constant of z -> exp(Delta/z) on [-c2, -c1]
  const auto deriv_mag = [delta](double t) {  // t = |z|
    return delta / (t * t) * std::exp(-delta / t);
  };
  double Lambda = std::max(deriv_mag(c1), deriv_mag(c2));
  const double tstar = delta / 2.0;
  if (tstar >= c1 && tstar <= c2) Lambda = std::max(Lambda, deriv_mag(tstar));

  const int dim = 12;
  const auto f = [delta](double z) { return std::exp(delta / z); };
  for (int rep = 0; rep < 20; ++rep) {
    auto random_sym = [&]() {
      Eigen::MatrixXd G(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) G(i, j) = gauss(rng);
      const Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
      Eigen::MatrixXd Q = qr.householderQ();
      Eigen::VectorXd ev(dim);
      for (int i = 0; i < dim; ++i) ev[i] = spec(rng);
      return Eigen::MatrixXd(Q * ev.asDiagonal() * Q.transpose());
    };
    const Eigen::MatrixXd N = random_sym();
    const Eigen::MatrixXd M = random_sym();
    const double lhs = (matrix_function(N, f) - matrix_function(M, f)).norm();
    const double rhs = Lambda * (N - M).norm();
    CHECK(lhs <= rhs * (1.0 + 1e-10));
  }
}
