#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "specdiff/bayes.hpp"
#include "specdiff/fixtures.hpp"
#include "specdiff/model.hpp"

using namespace specdiff;
using std::numbers::pi;

TEST_CASE("invariant_density: constant cases") {
  Grid g{10};
  {
    auto [mu, G] = invariant_density(GridFn::constant(g, 1.0), GridFn::constant(g, 0.0));
    CHECK(G == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sup_norm(mu - GridFn::constant(g, 1.0)) < 1e-13);
  }
  {
    auto [mu, G] = invariant_density(GridFn::constant(g, 2.0), GridFn::constant(g, 0.0));
    CHECK(G == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sup_norm(mu - GridFn::constant(g, 1.0)) < 1e-13);
  }
}

TEST_CASE("invariant_density: mass one and positivity") {
  Grid g{10};
  const auto p = make_bump_drift_truth(g);
  CHECK(quadrature(p.mu) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p.mu.min_value() > 0.0);
}

TEST_CASE("invariant_density: interior bump vs high-resolution oracle") {
  // oracle: same formulas evaluated on the m=14 grid, compared at shared
  // dyadic nodes
  Grid coarse{10}, fine{14};
  const auto bump = [](double x) {
    if (x <= 0.3 || x >= 0.7) return 0.0;
    const double t = (x - 0.3) / 0.4;
    return 0.25 * std::exp(-1.0 / (t * (1.0 - t))) * std::exp(4.0);
  };
  auto [mu_c, G_c] = invariant_density(GridFn::constant(coarse, 1.0),
                                       GridFn::from_function(coarse, bump));
  auto [mu_f, G_f] = invariant_density(GridFn::constant(fine, 1.0),
                                       GridFn::from_function(fine, bump));
  CHECK(G_c == doctest::Approx(G_f).epsilon(1e-6));
  const int stride = 1 << 4;
  double err = 0.0;
  for (int i = 0; i < coarse.size(); ++i)
    err = std::max(err, std::fabs(mu_c[i] - mu_f[i * stride]));
  CHECK(err < 1e-6);
}

TEST_CASE("invariant_density rejects nonpositive sigma^2") {
  Grid g{8};
  CHECK_THROWS(invariant_density(GridFn::constant(g, 0.0), GridFn::constant(g, 0.0)));
  CHECK_THROWS(invariant_density(GridFn::constant(g, -1.0), GridFn::constant(g, 0.0)));
}

TEST_CASE("b = 0 always gives mu proportional to 1/sigma^2") {
  Grid g{10};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.5, 2.0);
  for (int rep = 0; rep < 5; ++rep) {
    const double a = unif(rng), c = unif(rng), w = unif(rng);
    const GridFn s2 = GridFn::from_function(
        g, [&](double x) { return a + 0.3 * c * std::sin(2 * pi * w * x); });
    auto [mu, G] = invariant_density(s2, GridFn::constant(g, 0.0));
    const GridFn inv = s2.map([](double v) { return 1.0 / v; });
    const double Z = quadrature(inv);
    double rel = 0.0;
    for (int i = 0; i < g.size(); ++i)
      rel = std::max(rel, std::fabs(mu[i] - inv[i] / Z) / (inv[i] / Z));
    CHECK(rel < 1e-8);
  }
}

TEST_CASE("drift_from_mu: trivial cases") {
  Grid g{10};
  const GridFn one = GridFn::constant(g, 1.0);
  CHECK(sup_norm(drift_from_mu(one, GridFn::constant(g, 0.0))) < 1e-12);

  // constant sigma^2: b = H'/2
  const GridFn H = GridFn::from_function(g, [](double x) {
    if (x <= 0.2 || x >= 0.8) return 0.0;
    return 0.1 * (1.0 - std::cos(2 * pi * (x - 0.2) / 0.6));
  });
  const GridFn b = drift_from_mu(one, H);
  const GridFn half_dH = 0.5 * derivative(H);
  CHECK(sup_norm(b - half_dH) < 1e-12);
}

TEST_CASE("hierarchical round trip: mu = e^H / int e^H") {
  Grid g{10};
  const GridFn s2 = GridFn::from_function(
      g, [](double x) { return 1.0 + 0.1 * std::cos(2 * pi * x); });
  const GridFn H = GridFn::from_function(g, [](double x) {
    if (x <= 0.15 || x >= 0.85) return 0.0;
    const double t = (x - 0.15) / 0.7;
    return 0.1 * std::exp(-1.0 / (t * (1.0 - t))) * std::exp(4.0);
  });
  const GridFn b = drift_from_mu(s2, H);
  auto [mu, G] = invariant_density(s2, b);
  const GridFn eH = H.map([](double v) { return std::exp(v); });
  const double Z = quadrature(eH);
  double err = 0.0;
  for (int i = 0; i < g.size(); ++i) err = std::max(err, std::fabs(mu[i] - eH[i] / Z));
  CHECK(err < 1e-6);
}

TEST_CASE("validate_theta: trivial model inside, small sigma^2 outside") {
  Grid g{10};
  const auto basis = WaveletBasis::build(6, 2, 5, g);
  const auto p = make_trivial_truth(g);
  auto r = validate_theta(p, 0.5, 2.0, 2.0, basis);
  CHECK(r.in_theta);
  CHECK(r.in_theta_s);

  const auto small = DiffusionParams::make(GridFn::constant(g, 0.1),
                                           GridFn::constant(g, 0.0));
  auto r2 = validate_theta(small, 0.5, 2.0, 2.0, basis);
  CHECK(!r2.in_theta);
  CHECK(!r2.in_theta_s);
  CHECK(r2.d_observed == doctest::Approx(0.1));
}

TEST_CASE("validate_theta: in_theta_s implies in_theta") {
  Grid g{10};
  const auto basis = WaveletBasis::build(6, 2, 5, g);
  std::mt19937_64 rng(17);
  const PriorModel model(default_prior_config(), g);
  for (int rep = 0; rep < 20; ++rep) {
    auto [st, p] = sample_prior(model, rng);
    const auto r = validate_theta(p, 0.25, 10.0, 2.0, basis);
    if (r.in_theta_s) CHECK(r.in_theta);
  }
}

TEST_CASE("prior draws pass Theta_s for D large enough (sweep)") {
  Grid g{10};
  const auto basis = WaveletBasis::build(6, 2, 5, g);
  const PriorModel model(default_prior_config(), g);
  std::mt19937_64 rng(23);

  std::vector<DiffusionParams> draws;
  for (int rep = 0; rep < 200; ++rep) draws.push_back(sample_prior(model, rng).second);

  double D = 1.0;
  bool all_pass = false;
  for (; D <= 256.0 && !all_pass; D *= 2.0) {
    all_pass = true;
    for (const auto& p : draws)
      if (!validate_theta(p, 0.25, D, 2.0, basis).in_theta_s) {
        all_pass = false;
        break;
      }
  }
  CHECK(all_pass);
  CHECK(D <= 256.0);
}
