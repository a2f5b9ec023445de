#pragma once

#include <Eigen/Dense>

#include "specdiff/model.hpp"

namespace specdiff {

/// Discretized generator Lf = (1/mu)(S f')' with S = sigma^2 mu / 2 and
/// zero-flux (Neumann) boundary rows, assembled in flux form so that the
/// matrix is exactly symmetrizable under the trapezoid-weighted L^2(mu)
/// inner product. The eigendecomposition is computed eagerly; instances
/// are immutable afterwards.
class GeneratorMatrix {
 public:
  static GeneratorMatrix assemble(const DiffusionParams& p, Grid grid);

  int size() const { return static_cast<int>(weights_.size()); }
  const Grid& grid() const { return grid_; }
  const GridFn& mu() const { return mu_; }

  /// trapezoid-weighted masses c_i = w_i mu_i h; <f,g>_{L^2(mu)} = sum c f g
  const Eigen::VectorXd& mu_weights() const { return weights_; }

  /// eigenvalues in descending order, lambda_0 = 0 >= lambda_1 >= ...
  double eigenvalue(int k) const { return evals_[size() - 1 - k]; }
  /// eigenfunction for eigenvalue(k), orthonormal in L^2(mu)
  GridFn eigenfunction(int k) const;

  /// apply L to grid values
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;
  GridFn apply(const GridFn& f) const;

  /// columns u_k = C^{-1/2} q_k in ascending-eigenvalue order (internal layout)
  const Eigen::MatrixXd& eigenvectors_raw() const { return efuncs_; }
  const Eigen::VectorXd& eigenvalues_raw() const { return evals_; }

 private:
  Grid grid_;
  GridFn mu_;
  Eigen::VectorXd weights_;           // c_i
  Eigen::VectorXd tri_diag_, tri_off_;  // tridiagonal of L (row-scaled flux form)
  Eigen::VectorXd evals_;             // ascending
  Eigen::MatrixXd efuncs_;            // u_k columns, ascending order
};

/// Transition density matrix p(Delta, x_i, y_j) = [e^{Delta L}]_{ij}/(w_j h),
/// with per-row CDFs for sampling.
class TransitionKernel {
 public:
  TransitionKernel() = default;

  double delta() const { return delta_; }
  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& densities() const { return p_; }

  /// bilinear interpolation of the density at off-grid (x, y)
  double density(double x, double y) const;

  /// second largest eigenvalue of P_Delta
  double kappa1() const { return kappa1_; }

  /// row CDF value at grid node j for source row i
  const Eigen::MatrixXd& row_cdf() const { return cdf_; }

  friend TransitionKernel transition_kernel(const GeneratorMatrix& L, double delta);

 private:
  Grid grid_;
  double delta_ = 0.0;
  double kappa1_ = 0.0;
  Eigen::MatrixXd p_;    // densities
  Eigen::MatrixXd cdf_;  // per-row trapezoid CDF, monotone, cdf(i, M-1) = 1
};

TransitionKernel transition_kernel(const GeneratorMatrix& L, double delta);

/// (kappa1, u1): second eigenvalue of P_Delta and its eigenfunction,
/// normalized in L^2(mu) with the decreasing sign convention. Throws when
/// lambda_1 is degenerate with lambda_2.
std::pair<double, GridFn> spectral_pair(const GeneratorMatrix& L, double delta);

/// Green kernel K(x,z) of the inverse of (L - mu0(L)) on mean-zero
/// functions, with the intermediate kernel H.
class GreenKernel {
 public:
  const Eigen::MatrixXd& K() const { return K_; }
  const Eigen::MatrixXd& H() const { return H_; }
  const GridFn& mu0() const { return mu0_; }

  /// Jf(x) = int K(x,z) f(z) mu0(z) dz
  GridFn apply(const GridFn& f) const;

  friend GreenKernel green_kernel(const DiffusionParams& p, const GridFn& mu0);

 private:
  Grid grid_;
  GridFn mu0_;
  Eigen::MatrixXd K_, H_;
};

GreenKernel green_kernel(const DiffusionParams& p, const GridFn& mu0);

/// (int int (K_p - K_p0)^2 mu0(x) mu0(z) dx dz)^{1/2}, mu0 from p0.
double hs_distance(const DiffusionParams& p, const DiffusionParams& p0);

struct InfoDistances {
  double kl = 0.0;       // KL of one transition step under mu0 p0
  double var_log = 0.0;  // Var_{mu0 p0} log(p/p0)
  double kl_mu = 0.0;    // K(mu0, mu)
  double var_log_mu = 0.0;
  int clip_count = 0;    // quadrature nodes clipped at the density floor
};

InfoDistances info_distances(const DiffusionParams& p0, const DiffusionParams& p,
                             double delta);

/// ||mu - mu0||_{L^2([0,1])} + ||sigma^{-2} - sigma0^{-2}||_{(B^1_{1inf})*}
/// + ||b - b0||_{(B^2_{1inf})*}, dual norms through besov_dual_bound.
double small_ball_rhs(const DiffusionParams& p0, const DiffusionParams& p,
                      const WaveletBasis& basis);

}  // namespace specdiff
