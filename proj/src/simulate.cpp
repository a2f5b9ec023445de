#include "specdiff/simulate.hpp"

#include <cmath>

namespace specdiff {

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// invert a tabulated monotone CDF (values at grid nodes, cdf[0]=0,
// cdf[M-1]=1) at u, linear within cells
double invert_cdf(const std::vector<double>& cdf, const Grid& grid, double u) {
  const int M = static_cast<int>(cdf.size());
  int lo = 0, hi = M - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (cdf[mid] <= u ? lo : hi) = mid;
  }
  const double span = cdf[hi] - cdf[lo];
  const double t = span > 0.0 ? (u - cdf[lo]) / span : 0.0;
  return grid.point(lo) + t * grid.spacing();
}

}  // namespace

double sample_stationary(const GridFn& mu, std::mt19937_64& rng) {
  if (mu.min_value() < 0.0)
    throw std::invalid_argument("sample_stationary: mu must be nonnegative");
  const Grid grid = mu.grid();
  const GridFn C = cumulative(mu);
  const double total = C[C.size() - 1];
  std::vector<double> cdf(grid.size());
  for (int i = 0; i < grid.size(); ++i) cdf[i] = C[i] / total;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return invert_cdf(cdf, grid, unif(rng));
}

SamplePath sample_chain(const TransitionKernel& kernel, const GridFn& mu, long n,
                        std::mt19937_64& rng, std::optional<double> x0) {
  if (n < 1) throw std::invalid_argument("sample_chain: need n >= 1");
  const Grid grid = kernel.grid();
  const int M = grid.size();
  const double h = grid.spacing();
  const auto& cdf = kernel.row_cdf();

  SamplePath path;
  path.delta = kernel.delta();
  path.sampler = "chain";
  path.values.reserve(n + 1);
  double x = x0 ? *x0 : sample_stationary(mu, rng);
  path.values.push_back(x);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> row(M);
  for (long step = 0; step < n; ++step) {
    // blend the CDF rows bracketing the current (off-grid) state
    const int i = std::min(static_cast<int>(x / h), M - 2);
    const double s = (x - grid.point(i)) / h;
    for (int j = 0; j < M; ++j)
      row[j] = (1.0 - s) * cdf(i, j) + s * cdf(i + 1, j);
    x = invert_cdf(row, grid, unif(rng));
    path.values.push_back(x);
  }
  return path;
}

namespace {

// fold to the representative in (-1, 1]; |r| is the reflected state
double fold_to_cell(double y) {
  double r = std::remainder(y, 2.0);  // (-1, 1]
  if (r <= -1.0) r = 1.0;
  return r;
}

}  // namespace

SamplePath euler_reflected(const DiffusionParams& p, double delta, long n,
                           double fine_step, std::mt19937_64& rng) {
  if (fine_step <= 0.0 || fine_step > delta)
    throw std::invalid_argument("euler_reflected: need 0 < fine_step <= delta");
  const double ratio = delta / fine_step;
  const long substeps = std::lround(ratio);
  if (std::fabs(ratio - substeps) > 1e-9)
    throw std::invalid_argument("euler_reflected: fine_step must divide delta");

  SamplePath path;
  path.delta = delta;
  path.fine_step = fine_step;
  path.sampler = "euler";
  path.values.reserve(n + 1);

  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sq = std::sqrt(fine_step);

  double y = sample_stationary(p.mu, rng);
  path.values.push_back(y);
  for (long obs = 0; obs < n; ++obs) {
    for (long k = 0; k < substeps; ++k) {
      const double r = fold_to_cell(y);
      const double ax = std::fabs(r);
      const double drift = (r >= 0.0) ? p.b.eval(ax) : -p.b.eval(ax);
      const double vol = std::sqrt(p.sigma2.eval(ax));
      y += drift * fine_step + vol * sq * gauss(rng);
    }
    y = std::fabs(fold_to_cell(y));  // fold the observation into [0,1]
    path.values.push_back(y);
  }
  return path;
}

}  // namespace specdiff
