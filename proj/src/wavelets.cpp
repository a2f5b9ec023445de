#include "specdiff/wavelets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace specdiff {

namespace {

// Daubechies low-pass filters, sum h_k = sqrt(2), orthonormal shifts.
const std::vector<std::vector<double>> kFilters = {
    // N=1 (Haar)
    {0.7071067811865475244, 0.7071067811865475244},
    // N=2
    {0.4829629131445341434, 0.8365163037378079056, 0.224143868042013381,
     -0.1294095225512603812},
    // N=3
    {0.332670552950082616, 0.8068915093110925765, 0.4598775021184915701,
     -0.1350110200102545887, -0.08544127388202666169, 0.0352262918857095366},
    // N=4
    {0.2303778133088965009, 0.7148465705529156471, 0.6308807679298589079,
     -0.02798376941685985421, -0.1870348117190930841, 0.03084138183556076363,
     0.03288301166688519974, -0.0105974017850690321},
    // N=5
    {0.1601023979741929145, 0.6038292697971896705, 0.7243085284377729277,
     0.1384281459013207315, -0.2422948870663820319, -0.03224486958463837465,
     0.07757149384004571352, -0.006241490212798274274, -0.01258075199908199947,
     0.003335725285473771278},
    // N=6
    {0.1115407433501094636, 0.4946238903984530857, 0.7511339080210953507,
     0.3152503517091976291, -0.2262646939654398201, -0.1297668675672619356,
     0.0975016055873230491, 0.02752286553030572863, -0.03158203931748602957,
     0.0005538422011614961393, 0.00477725751094551064, -0.001077301085308479565},
    // N=7
    {0.07785205408500917902, 0.3965393194819173065, 0.7291320908462351199,
     0.4697822874051931225, -0.1439060039285649754, -0.2240361849938749826,
     0.07130921926683026475, 0.08061260915108307191, -0.03802993693501441358,
     -0.01657454163066688065, 0.01255099855609984061, 0.0004295779729213665211,
     -0.001801640704047490915, 0.0003537137999745202484},
    // N=8
    {0.05441584224310400996, 0.3128715909142999707, 0.6756307362972898068,
     0.5853546836542067128, -0.01582910525634930567, -0.2840155429615469265,
     0.0004724845739132827704, 0.1287474266204784589, -0.01736930100180754617,
     -0.04408825393079475151, 0.01398102791739828165, 0.008746094047405776716,
     -0.00487035299345157431, -0.0003917403733769470463, 0.0006754494064505693664,
     -0.0001174767841247695337}};

// phi on [0, 2N-1] at step 2^-r: integer values from the eigenvector of the
// transfer matrix, then dyadic refinement phi(x) = sqrt2 sum_k h_k phi(2x-k).
std::vector<double> cascade_scaling(const std::vector<double>& h, int r) {
  const int taps = static_cast<int>(h.size());
  const int sup = taps - 1;
  const double s2 = std::sqrt(2.0);

  std::vector<double> cur;
  if (taps == 2) {  // Haar: right-continuous indicator of [0,1)
    cur.assign(2, 0.0);
    cur[0] = 1.0;
  } else {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(sup + 1, sup + 1);
    for (int i = 0; i <= sup; ++i)
      for (int j = 0; j <= sup; ++j) {
        const int k = 2 * i - j;
        if (k >= 0 && k < taps) A(i, j) = s2 * h[k];
      }
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    int best = 0;
    for (int i = 1; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()[i] - 1.0) < std::abs(es.eigenvalues()[best] - 1.0))
        best = i;
    Eigen::VectorXd v = es.eigenvectors().col(best).real();
    cur.assign(v.data(), v.data() + v.size());
    double sum = 0.0;
    for (double x : cur) sum += x;
    for (double& x : cur) x /= sum;
  }

  for (int level = 1; level <= r; ++level) {
    const int prev_n = static_cast<int>(cur.size()) - 1;  // sup * 2^{level-1}
    std::vector<double> next(2 * prev_n + 1, 0.0);
    for (int i = 0; i <= prev_n; ++i) next[2 * i] = cur[i];
    for (int i = 0; i < prev_n; ++i) {
      double s = 0.0;
      for (int k = 0; k < taps; ++k) {
        const int pos = (2 * i + 1) - k * (prev_n / sup);
        if (pos >= 0 && pos <= prev_n) s += s2 * h[k] * cur[pos];
      }
      next[2 * i + 1] = s;
    }
    cur = std::move(next);
  }
  return cur;
}

// psi on [0, 2N-1] at step 2^-r from phi at the same resolution,
// psi(x) = sqrt2 sum_k g_k phi(2x - k), g_k = (-1)^k h_{2N-1-k}.
std::vector<double> cascade_wavelet(const std::vector<double>& h,
                                    const std::vector<double>& phi, int r) {
  const int taps = static_cast<int>(h.size());
  const int sup = taps - 1;
  const double s2 = std::sqrt(2.0);
  if (taps == 2) {  // Haar, right-continuous
    const int n = sup << r;
    std::vector<double> psi(n + 1, 0.0);
    for (int j = 0; j < n; ++j) psi[j] = (2 * j < n) ? 1.0 : -1.0;
    return psi;
  }
  std::vector<double> g(taps);
  for (int k = 0; k < taps; ++k) g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[taps - 1 - k];
  const int n = sup << r;
  const int step = 1 << r;
  std::vector<double> psi(n + 1, 0.0);
  for (int j = 0; j <= n; ++j) {
    double s = 0.0;
    for (int k = 0; k < taps; ++k) {
      const int pos = 2 * j - k * step;
      if (pos >= 0 && pos <= n) s += s2 * g[k] * phi[pos];
    }
    psi[j] = s;
  }
  return psi;
}

// Periodization: 2^{l/2} sum_j mother(2^l (x + j) - k) tabulated on the grid.
GridFn periodize(const std::vector<double>& mother, int level, int shift,
                 const Grid& grid) {
  const int m = grid.m;
  const int r = m - level;
  const int M = grid.size();
  const int period = 1 << m;  // one unit interval in mother-index units
  const int top = static_cast<int>(mother.size()) - 1;
  const double scale = std::pow(2.0, 0.5 * level);
  std::vector<double> v(M, 0.0);
  for (int i = 0; i < M; ++i) {
    const long base = static_cast<long>(i) - (static_cast<long>(shift) << r);
    long j0 = static_cast<long>(std::ceil(static_cast<double>(-base) / period));
    long j1 = static_cast<long>(std::floor(static_cast<double>(top - base) / period));
    double s = 0.0;
    for (long j = j0; j <= j1; ++j) s += mother[base + j * period];
    v[i] = scale * s;
  }
  return GridFn(grid, std::move(v));
}

}  // namespace

std::vector<double> daubechies_filter(int vanishing_moments) {
  if (vanishing_moments < 1 ||
      vanishing_moments > static_cast<int>(kFilters.size()))
    throw std::invalid_argument("daubechies_filter: N out of tabulated range");
  return kFilters[vanishing_moments - 1];
}

WaveletBasis WaveletBasis::build(int vanishing_moments, int coarsest_level,
                                 int finest_level, Grid grid) {
  if (vanishing_moments < 1)
    throw std::invalid_argument("WaveletBasis: need N >= 1");
  if (coarsest_level < 2)
    throw std::invalid_argument("WaveletBasis: coarsest level must be >= 2");
  if (finest_level < coarsest_level)
    throw std::invalid_argument("WaveletBasis: finest level below coarsest");
  if (finest_level > grid.m - 3)
    throw std::invalid_argument(
        "WaveletBasis: finest level too fine for the grid (need Jmax <= m-3)");

  WaveletBasis b;
  b.N_ = vanishing_moments;
  b.J0_ = coarsest_level;
  b.Jmax_ = finest_level;
  b.grid_ = grid;

  const auto h = daubechies_filter(vanishing_moments);

  // scaling row, labeled J0-1 but tabulated at level J0
  {
    const int r = grid.m - coarsest_level;
    const auto phi = cascade_scaling(h, r);
    std::vector<GridFn> row;
    row.reserve(1 << coarsest_level);
    for (int k = 0; k < (1 << coarsest_level); ++k)
      row.push_back(periodize(phi, coarsest_level, k, grid));
    b.rows_.push_back(std::move(row));
  }
  for (int l = coarsest_level; l <= finest_level; ++l) {
    const int r = grid.m - l;
    const auto phi = cascade_scaling(h, r);
    const auto psi = cascade_wavelet(h, phi, r);
    std::vector<GridFn> row;
    row.reserve(1 << l);
    for (int k = 0; k < (1 << l); ++k) row.push_back(periodize(psi, l, k, grid));
    b.rows_.push_back(std::move(row));
  }
  return b;
}

int WaveletBasis::row_of(int level) const {
  if (level < J0_ - 1 || level > Jmax_)
    throw std::out_of_range("WaveletBasis: level out of range");
  return level - (J0_ - 1);
}

const GridFn& WaveletBasis::fn(int level, int shift) const {
  const auto& row = rows_[row_of(level)];
  if (shift < 0 || shift >= static_cast<int>(row.size()))
    throw std::out_of_range("WaveletBasis: shift out of range");
  return row[shift];
}

std::pair<double, double> WaveletBasis::support(int level, int shift) const {
  row_of(level);
  const int l = std::max(level, J0_);
  const double lo = shift * std::pow(2.0, -l);
  const double width = (2 * N_ - 1) * std::pow(2.0, -l);
  return {lo, lo + width};
}

int WaveletBasis::dim_upto(int J) const {
  if (J < J0_ - 1 || J > Jmax_)
    throw std::out_of_range("WaveletBasis: truncation level out of range");
  return 1 << (J + 1);
}

std::vector<WaveletIndex> WaveletBasis::indices_upto(int J) const {
  std::vector<WaveletIndex> out;
  out.reserve(dim_upto(J));
  for (int l = J0_ - 1; l <= J; ++l)
    for (int k = 0; k < count(l); ++k) out.push_back({l, k});
  return out;
}

IndexSet interior_index_set(const WaveletBasis& basis, double A, double B) {
  if (!(0.0 < A && A < B && B < 1.0))
    throw std::invalid_argument("interior_index_set: need 0 < A < B < 1");
  IndexSet set;
  set.A = A;
  set.B = B;
  // wavelet rows only; the scaling row carries mass and is not part of I
  for (int l = basis.coarsest_level(); l <= basis.finest_level(); ++l)
    for (int k = 0; k < basis.count(l); ++k) {
      const auto [lo, hi] = basis.support(l, k);
      if (lo >= A && hi <= B) set.indices.push_back({l, k});
    }
  if (set.indices.empty())
    throw std::invalid_argument(
        "interior_index_set: no basis function fits inside [A,B]");
  return set;
}

WaveletCoeffs::WaveletCoeffs(const WaveletBasis& basis, int J)
    : J_(J), J0_(basis.coarsest_level()) {
  if (J > basis.finest_level())
    throw std::invalid_argument("WaveletCoeffs: level above finest tabulated");
  for (int l = J0_ - 1; l <= J; ++l)
    rows_.emplace_back(basis.count(l), 0.0);
}

double WaveletCoeffs::at(int level, int shift) const {
  return rows_.at(level - (J0_ - 1)).at(shift);
}

double& WaveletCoeffs::at(int level, int shift) {
  return rows_.at(level - (J0_ - 1)).at(shift);
}

double WaveletCoeffs::squared_sum() const {
  double s = 0.0;
  for (const auto& row : rows_)
    for (double c : row) s += c * c;
  return s;
}

WaveletCoeffs analyze(const GridFn& f, const WaveletBasis& basis, int J) {
  WaveletCoeffs c(basis, J);
  for (int l = basis.coarsest_level() - 1; l <= J; ++l)
    for (int k = 0; k < basis.count(l); ++k)
      c.at(l, k) = quadrature(f * basis.fn(l, k));
  return c;
}

GridFn synthesize(const WaveletCoeffs& c, const WaveletBasis& basis) {
  GridFn out = GridFn::constant(basis.grid(), 0.0);
  for (int l = basis.coarsest_level() - 1; l <= c.truncation_level(); ++l)
    for (int k = 0; k < basis.count(l); ++k) {
      const double w = c.at(l, k);
      if (w != 0.0) out += w * basis.fn(l, k);
    }
  return out;
}

double besov_dual_bound(const GridFn& f, double s, const WaveletBasis& basis) {
  if (s <= 0.0) throw std::invalid_argument("besov_dual_bound: need s > 0");
  const auto c = analyze(f, basis, basis.finest_level());
  double total = 0.0;
  for (int l = basis.coarsest_level() - 1; l <= basis.finest_level(); ++l) {
    double mx = 0.0;
    for (int k = 0; k < basis.count(l); ++k) mx = std::max(mx, std::fabs(c.at(l, k)));
    total += std::pow(2.0, -l * (s - 0.5)) * mx;
  }
  return total;
}

double holder_norm(const GridFn& f, double t, double gamma,
                   const WaveletBasis& basis) {
  if (t <= 0.0 || gamma < 0.0)
    throw std::invalid_argument("holder_norm: need t > 0, gamma >= 0");
  const auto c = analyze(f, basis, basis.finest_level());
  double mx = 0.0;
  for (int l = basis.coarsest_level() - 1; l <= basis.finest_level(); ++l)
    for (int k = 0; k < basis.count(l); ++k)
      mx = std::max(mx, std::pow(2.0, l * (t + 0.5)) * std::pow(l, gamma) *
                            std::fabs(c.at(l, k)));
  return mx;
}

double sobolev_norm(const GridFn& f, double t, const WaveletBasis& basis) {
  const auto c = analyze(f, basis, basis.finest_level());
  double s = 0.0;
  for (int l = basis.coarsest_level() - 1; l <= basis.finest_level(); ++l) {
    double rowsum = 0.0;
    for (int k = 0; k < basis.count(l); ++k) rowsum += c.at(l, k) * c.at(l, k);
    // the low-pass block enters unweighted
    const double w = basis.is_scaling_row(l) ? 1.0 : std::pow(4.0, l * t);
    s += w * rowsum;
  }
  return std::sqrt(s);
}

}  // namespace specdiff
