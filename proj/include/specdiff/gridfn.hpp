#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace specdiff {

/// Uniform dyadic grid on [0,1]: M = 2^m + 1 points x_i = i/2^m.
struct Grid {
  int m = 10;

  int size() const { return (1 << m) + 1; }
  double spacing() const { return 1.0 / (1 << m); }
  double point(int i) const { return static_cast<double>(i) / (1 << m); }

  bool operator==(const Grid&) const = default;
};

/// Real-valued function tabulated on a Grid. Values are fixed at
/// construction; all queries are const and safe for concurrent reads.
class GridFn {
 public:
  GridFn() = default;
  GridFn(Grid grid, std::vector<double> values);

  static GridFn constant(Grid grid, double c);
  static GridFn from_function(Grid grid, const std::function<double(double)>& f);

  const Grid& grid() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  std::span<const double> values() const { return values_; }
  double operator[](int i) const { return values_[i]; }

  /// Linear interpolation; x clamped to [0,1].
  double eval(double x) const;

  double min_value() const;
  double max_value() const;

  GridFn& operator+=(const GridFn& g);
  GridFn& operator-=(const GridFn& g);
  GridFn& operator*=(double c);

  friend GridFn operator+(GridFn f, const GridFn& g) { return f += g; }
  friend GridFn operator-(GridFn f, const GridFn& g) { return f -= g; }
  friend GridFn operator*(double c, GridFn f) { return f *= c; }

  /// Pointwise product.
  friend GridFn operator*(const GridFn& f, const GridFn& g);

  /// Pointwise map, same grid.
  GridFn map(const std::function<double(double)>& op) const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Trapezoid rule for \int_0^1 f; exact for affine f.
double quadrature(const GridFn& f);

/// Trapezoid rule for \int_a^b f with interpolated partial end cells.
double quadrature(const GridFn& f, double a, double b);

/// Trapezoid primitive F(x_i) = \int_0^{x_i} f.
GridFn cumulative(const GridFn& f);

/// Central differences in the interior, second-order one-sided stencils
/// at the endpoints. Throws if the grid has fewer than 3 points.
GridFn derivative(const GridFn& f);

/// Trapezoid approximation of (\int_a^b (f-g)^2)^{1/2}; requires
/// 0 <= a < b <= 1 and a shared grid.
double l2_distance(const GridFn& f, const GridFn& g, double a, double b);

/// max_i |f_i|
double sup_norm(const GridFn& f);

/// max over grid points restricted to [a,b]
double sup_norm(const GridFn& f, double a, double b);

}  // namespace specdiff
