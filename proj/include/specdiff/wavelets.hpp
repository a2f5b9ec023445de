#pragma once

#include <utility>
#include <vector>

#include "specdiff/gridfn.hpp"

namespace specdiff {

struct WaveletIndex {
  int level;  // the row labeled J0-1 holds the scaling functions
  int shift;
  bool operator==(const WaveletIndex&) const = default;
};

/// Periodized Daubechies wavelet basis of L^2([0,1]), tabulated on a dyadic
/// grid by the cascade algorithm (exact at dyadic rationals). Row l = J0-1
/// holds the 2^J0 periodized scaling functions of level J0; rows J0..Jmax
/// hold the 2^l wavelets per level. Tables are immutable after build.
class WaveletBasis {
 public:
  static WaveletBasis build(int vanishing_moments, int coarsest_level,
                            int finest_level, Grid grid);

  int vanishing_moments() const { return N_; }
  int coarsest_level() const { return J0_; }
  int finest_level() const { return Jmax_; }
  const Grid& grid() const { return grid_; }

  int count(int level) const { return level == J0_ - 1 ? (1 << J0_) : (1 << level); }
  bool is_scaling_row(int level) const { return level == J0_ - 1; }

  const GridFn& fn(int level, int shift) const;
  double eval(int level, int shift, double x) const { return fn(level, shift).eval(x); }

  /// Support [lo, hi] before reduction mod 1; hi > 1 means the function
  /// wraps around the circle. Width is (2N-1) 2^{-max(level, J0)}.
  std::pair<double, double> support(int level, int shift) const;
  bool wraps(int level, int shift) const { return support(level, shift).second > 1.0; }

  /// dim V_J = 2^{J+1} for J0-1 <= J <= Jmax.
  int dim_upto(int J) const;
  std::vector<WaveletIndex> indices_upto(int J) const;

 private:
  int N_ = 0, J0_ = 0, Jmax_ = 0;
  Grid grid_;
  std::vector<std::vector<GridFn>> rows_;  // rows_[0] = scaling row
  int row_of(int level) const;
};

/// Maximal set of indices whose tabulated support lies in [A,B].
struct IndexSet {
  std::vector<WaveletIndex> indices;
  double A = 0.0, B = 1.0;
};

IndexSet interior_index_set(const WaveletBasis& basis, double A, double B);

/// Coefficient arrays for levels J0-1..J.
class WaveletCoeffs {
 public:
  WaveletCoeffs() = default;
  WaveletCoeffs(const WaveletBasis& basis, int J);

  int truncation_level() const { return J_; }
  double at(int level, int shift) const;
  double& at(int level, int shift);

  /// sum of squared coefficients
  double squared_sum() const;

 private:
  int J_ = 0;
  int J0_ = 0;
  std::vector<std::vector<double>> rows_;
};

WaveletCoeffs analyze(const GridFn& f, const WaveletBasis& basis, int J);
GridFn synthesize(const WaveletCoeffs& c, const WaveletBasis& basis);

/// Sum_l 2^{-l(s-1/2)} max_k |<f, psi_lk>| over all tabulated levels;
/// upper bound for the (B^s_{1 inf})* dual norm.
double besov_dual_bound(const GridFn& f, double s, const WaveletBasis& basis);

/// sup_{l,k} 2^{l(t+1/2)} l^gamma |<f, psi_lk>|
double holder_norm(const GridFn& f, double t, double gamma, const WaveletBasis& basis);

/// Truncated wavelet form of the H^t = B^t_22 norm:
/// (Sum_l 2^{2lt} Sum_k <f, psi_lk>^2)^{1/2}
double sobolev_norm(const GridFn& f, double t, const WaveletBasis& basis);

/// Filter taps, unit tests and the basis builder share these.
std::vector<double> daubechies_filter(int vanishing_moments);

}  // namespace specdiff
