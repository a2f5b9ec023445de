#include "specdiff/bayes.hpp"

#include <cmath>
#include <numbers>

namespace specdiff {

namespace {

double truncnorm_log_normalizer(double B_tilde) {
  // int_{-Bt}^{Bt} e^{-x^2/2} dx = sqrt(2 pi) (Phi(Bt) - Phi(-Bt))
  const double z = std::erf(B_tilde / std::numbers::sqrt2);
  return std::log(std::sqrt(2.0 * std::numbers::pi) * z);
}

}  // namespace

double PriorConfig::zeta() const {
  switch (density) {
    case CoeffDensity::kUniform:
      return 1.0 / (2.0 * B_tilde);
    case CoeffDensity::kTruncatedNormal:
      return std::exp(-0.5 * B * B - truncnorm_log_normalizer(B_tilde));
  }
  return 0.0;
}

namespace {

// smallest l with 2^{-l(s+1)} <= eps_n, eps_n = n^{-(s+1)/(2s+3)}
int derived_truncation(long n, double s) {
  if (n <= 1) return 0;
  const double l = std::log2(static_cast<double>(n)) / (2.0 * s + 3.0);
  return static_cast<int>(std::ceil(l));
}

}  // namespace

PriorModel::PriorModel(PriorConfig cfg, Grid grid, long n_data)
    : cfg_(cfg),
      grid_(grid),
      basis_(WaveletBasis::build(cfg.vanishing_moments, cfg.J0,
                                 std::min(cfg.Jmax, grid.m - 3), grid)),
      interior_(interior_index_set(basis_, cfg.A, cfg.B_int)) {
  if (cfg.B > cfg.B_tilde)
    throw std::invalid_argument("PriorModel: need B <= B_tilde");

  int min_level = basis_.finest_level();
  for (const auto& idx : interior_.indices) min_level = std::min(min_level, idx.level);

  const int derived = derived_truncation(n_data, cfg.s);
  L_ = cfg.L_n >= 0 ? cfg.L_n
                    : (n_data > 0 ? std::max(derived, min_level) : basis_.finest_level());
  Lbar_ = cfg.L_bar_n >= 0
              ? cfg.L_bar_n
              : (n_data > 0 ? std::max(derived, min_level) : basis_.finest_level());
  L_ = std::min(L_, basis_.finest_level());
  Lbar_ = std::min(Lbar_, basis_.finest_level());

  for (const auto& idx : interior_.indices) {
    const double l = idx.level;
    if (idx.level <= L_) {
      u_idx_.push_back(idx);
      u_w_.push_back(std::pow(2.0, -l * (cfg.s + 0.5)) / (l * l));
    }
    if (idx.level <= Lbar_) {
      ubar_idx_.push_back(idx);
      ubar_w_.push_back(std::pow(2.0, -l * (cfg.s + 1.5)) / (l * l));
    }
  }
  if (u_idx_.empty() || ubar_idx_.empty())
    throw std::invalid_argument("PriorModel: empty coefficient index set");
}

GridFn PriorModel::log_sigma2_inv(const CoefficientState& st) const {
  GridFn out = GridFn::constant(grid_, 0.0);
  for (size_t i = 0; i < u_idx_.size(); ++i) {
    const double c = u_w_[i] * st.u[i];
    if (c != 0.0) out += c * basis_.fn(u_idx_[i].level, u_idx_[i].shift);
  }
  return out;
}

GridFn PriorModel::log_mu_series(const CoefficientState& st) const {
  GridFn out = GridFn::constant(grid_, 0.0);
  for (size_t i = 0; i < ubar_idx_.size(); ++i) {
    const double c = ubar_w_[i] * st.u_bar[i];
    if (c != 0.0) out += c * basis_.fn(ubar_idx_[i].level, ubar_idx_[i].shift);
  }
  return out;
}

DiffusionParams PriorModel::assemble(const CoefficientState& st) const {
  if (st.u.size() != u_idx_.size() || st.u_bar.size() != ubar_idx_.size())
    throw std::invalid_argument("PriorModel: state layout mismatch");
  const GridFn sigma2 = log_sigma2_inv(st).map([](double v) { return std::exp(-v); });
  const GridFn H = log_mu_series(st);
  const GridFn b = drift_from_mu(sigma2, H);
  return DiffusionParams::make(sigma2, b);
}

CoefficientState PriorModel::zero_state() const {
  return CoefficientState{std::vector<double>(u_idx_.size(), 0.0),
                          std::vector<double>(ubar_idx_.size(), 0.0)};
}

namespace {

double draw_coeff(const PriorConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-cfg.B_tilde, cfg.B_tilde);
  if (cfg.density == CoeffDensity::kUniform) return unif(rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    const double x = gauss(rng);
    if (std::fabs(x) <= cfg.B_tilde) return x;
  }
}

double log_coeff_density(double x, const PriorConfig& cfg) {
  if (std::fabs(x) > cfg.B_tilde) return -std::numeric_limits<double>::infinity();
  if (cfg.density == CoeffDensity::kUniform)
    return -std::log(2.0 * cfg.B_tilde);
  return -0.5 * x * x - truncnorm_log_normalizer(cfg.B_tilde);
}

}  // namespace

std::pair<CoefficientState, DiffusionParams> sample_prior(const PriorModel& model,
                                                          std::mt19937_64& rng) {
  CoefficientState st = model.zero_state();
  for (double& v : st.u) v = draw_coeff(model.config(), rng);
  for (double& v : st.u_bar) v = draw_coeff(model.config(), rng);
  return {st, model.assemble(st)};
}

double log_prior_density(const CoefficientState& st, const PriorModel& model) {
  double s = 0.0;
  for (double v : st.u) s += log_coeff_density(v, model.config());
  for (double v : st.u_bar) s += log_coeff_density(v, model.config());
  return s;
}

double log_likelihood(const DiffusionParams& p, const SamplePath& path,
                      double delta) {
  if (path.values.empty()) return 0.0;
  for (double x : path.values)
    if (x < 0.0 || x > 1.0)
      throw std::invalid_argument("log_likelihood: path leaves [0,1]");

  const double mu0x = p.mu.eval(path.values[0]);
  if (mu0x <= 1e-12)
    throw std::runtime_error("log_likelihood: clipped density at X_0");
  double ll = std::log(mu0x);
  if (path.values.size() == 1) return ll;

  const auto L = GeneratorMatrix::assemble(p, p.sigma2.grid());
  const auto kernel = transition_kernel(L, delta);
  for (size_t i = 1; i < path.values.size(); ++i) {
    const double d = kernel.density(path.values[i - 1], path.values[i]);
    if (d <= 1e-12)
      throw std::runtime_error("log_likelihood: clipped density at increment " +
                               std::to_string(i));
    ll += std::log(d);
  }
  return ll;
}

namespace {

double reflect_into(double x, double bound) {
  while (x > bound || x < -bound) {
    if (x > bound) x = 2.0 * bound - x;
    if (x < -bound) x = -2.0 * bound - x;
  }
  return x;
}

// kernel-backed likelihood with the data-point interpolation weights
// precomputed once per path
class LikelihoodEval {
 public:
  LikelihoodEval(const PriorModel& coarse, const SamplePath& path, double delta)
      : model_(coarse), delta_(delta) {
    const Grid g = coarse.grid();
    const double h = g.spacing();
    const int M = g.size();
    for (double x : path.values) {
      const double t = std::clamp(x, 0.0, 1.0);
      const int i = std::min(static_cast<int>(t / h), M - 2);
      idx_.push_back(i);
      frac_.push_back((t - g.point(i)) / h);
    }
  }

  // -inf when the surrogate density degenerates for the proposal
  double operator()(const CoefficientState& st) const {
    if (idx_.empty()) return 0.0;
    DiffusionParams p = model_.assemble(st);
    const double mu0x =
        (1.0 - frac_[0]) * p.mu[idx_[0]] + frac_[0] * p.mu[idx_[0] + 1];
    if (mu0x <= 1e-12) return -std::numeric_limits<double>::infinity();
    double ll = std::log(mu0x);
    if (idx_.size() == 1) return ll;

    const auto L = GeneratorMatrix::assemble(p, model_.grid());
    const auto kernel = transition_kernel(L, delta_);
    const auto& P = kernel.densities();
    for (size_t l = 1; l < idx_.size(); ++l) {
      const int i = idx_[l - 1], j = idx_[l];
      const double s = frac_[l - 1], t = frac_[l];
      const double d = (1 - s) * ((1 - t) * P(i, j) + t * P(i, j + 1)) +
                       s * ((1 - t) * P(i + 1, j) + t * P(i + 1, j + 1));
      if (d <= 1e-12) return -std::numeric_limits<double>::infinity();
      ll += std::log(d);
    }
    return ll;
  }

 private:
  const PriorModel& model_;
  double delta_;
  std::vector<int> idx_;
  std::vector<double> frac_;
};

}  // namespace

Chain mcmc_run(const PriorModel& model, const SamplePath& path,
               const McmcConfig& cfg) {
  if (cfg.n_iters < 1) throw std::invalid_argument("mcmc_run: need n_iters >= 1");

  PriorConfig coarse_cfg = model.config();
  coarse_cfg.L_n = model.truncation_level();
  coarse_cfg.L_bar_n = model.truncation_level_bar();
  const PriorModel coarse(coarse_cfg, Grid{cfg.likelihood_m});
  const LikelihoodEval loglik(coarse, path, path.values.empty() ? 0.1 : path.delta);

  auto rng = make_rng(cfg.seed);
  CoefficientState st = sample_prior(model, rng).first;
  double lp = log_prior_density(st, model) + loglik(st);

  const size_t nu = st.u.size(), nub = st.u_bar.size();
  const size_t ncoef = nu + nub;
  const double bound = model.config().B_tilde;

  Chain chain;
  chain.seed = cfg.seed;
  chain.thin = cfg.thin;
  chain.n_iters = cfg.n_iters;
  chain.states.push_back(st);
  chain.log_posts.push_back(lp);

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::map<int, long> acc_by_level, tot_by_level;
  long accepted = 0, consecutive_rejects = 0;

  for (long it = 0; it < cfg.n_iters; ++it) {
    const size_t c = it % ncoef;
    const bool is_u = c < nu;
    const int level = is_u ? model.u_indices()[c].level
                           : model.ubar_indices()[c - nu].level;
    double& slot = is_u ? st.u[c] : st.u_bar[c - nu];
    const double old = slot;
    slot = reflect_into(old + cfg.proposal_scale * gauss(rng), bound);

    const double lp_new = log_prior_density(st, model) + loglik(st);
    ++tot_by_level[level];
    if (std::log(unif(rng)) < lp_new - lp) {
      lp = lp_new;
      ++accepted;
      ++acc_by_level[level];
      consecutive_rejects = 0;
    } else {
      slot = old;
      if (++consecutive_rejects >= 1000) chain.stall_warning = true;
    }
    if ((it + 1) % cfg.thin == 0) {
      chain.states.push_back(st);
      chain.log_posts.push_back(lp);
    }
  }

  chain.acceptance = static_cast<double>(accepted) / cfg.n_iters;
  for (const auto& [level, tot] : tot_by_level)
    chain.acceptance_by_level[level] =
        static_cast<double>(acc_by_level[level]) / tot;
  return chain;
}

namespace {

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const size_t i = static_cast<size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  const double t = pos - i;
  return (1 - t) * v[i] + t * v[i + 1];
}

double ess_estimate(const std::vector<double>& x) {
  const size_t n = x.size();
  if (n < 10) return static_cast<double>(n);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= n;
  if (var <= 0.0) return static_cast<double>(n);
  double rho_sum = 0.0;
  for (size_t lag = 1; lag < n / 2; ++lag) {
    double c = 0.0;
    for (size_t i = 0; i + lag < n; ++i) c += (x[i] - mean) * (x[i + lag] - mean);
    c /= (n - lag) * var;
    if (c < 0.0) break;
    rho_sum += c;
  }
  return n / (1.0 + 2.0 * rho_sum);
}

}  // namespace

PosteriorDiagnostics posterior_diagnostics(const Chain& chain,
                                           const PriorModel& model,
                                           const DiffusionParams& truth, long n,
                                           double s, double A, double B) {
  if (chain.states.size() < 100)
    throw std::invalid_argument("posterior_diagnostics: need >= 100 stored states");
  PosteriorDiagnostics out;
  const size_t burn = chain.states.size() / 5;
  for (size_t i = burn; i < chain.states.size(); ++i) {
    const DiffusionParams p = model.assemble(chain.states[i]);
    out.dist_sigma2.push_back(l2_distance(p.sigma2, truth.sigma2, A, B));
    out.dist_b.push_back(l2_distance(p.b, truth.b, A, B));
  }
  out.median_sigma2 = quantile(out.dist_sigma2, 0.5);
  out.q10_sigma2 = quantile(out.dist_sigma2, 0.1);
  out.q90_sigma2 = quantile(out.dist_sigma2, 0.9);
  out.median_b = quantile(out.dist_b, 0.5);
  out.q10_b = quantile(out.dist_b, 0.1);
  out.q90_b = quantile(out.dist_b, 0.9);

  const double eps_n = std::pow(static_cast<double>(n), -(s + 1.0) / (2.0 * s + 3.0));
  out.delta_n = n * std::pow(eps_n, 3.0);
  out.delta_n_prime = n * static_cast<double>(n) * std::pow(eps_n, 5.0);
  out.M_grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  for (double M : out.M_grid) {
    long es = 0, eb = 0;
    for (double dv : out.dist_sigma2)
      if (dv > M * out.delta_n) ++es;
    for (double dv : out.dist_b)
      if (dv > M * out.delta_n_prime) ++eb;
    out.exceed_sigma2.push_back(static_cast<double>(es) / out.dist_sigma2.size());
    out.exceed_b.push_back(static_cast<double>(eb) / out.dist_b.size());
  }
  out.ess_sigma2 = ess_estimate(out.dist_sigma2);
  return out;
}

}  // namespace specdiff
