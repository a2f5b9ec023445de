#include "specdiff/gridfn.hpp"

#include <algorithm>

namespace specdiff {

GridFn::GridFn(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size())
    throw std::invalid_argument("GridFn: value count does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("GridFn: non-finite value");
}

GridFn GridFn::constant(Grid grid, double c) {
  return GridFn(grid, std::vector<double>(grid.size(), c));
}

GridFn GridFn::from_function(Grid grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (int i = 0; i < grid.size(); ++i) v[i] = f(grid.point(i));
  return GridFn(grid, std::move(v));
}

double GridFn::eval(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  const double h = grid_.spacing();
  const int last = size() - 1;
  int i = std::min(static_cast<int>(x / h), last - 1);
  double t = (x - grid_.point(i)) / h;
  return (1.0 - t) * values_[i] + t * values_[i + 1];
}

double GridFn::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double GridFn::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

GridFn& GridFn::operator+=(const GridFn& g) {
  if (!(grid_ == g.grid_)) throw std::invalid_argument("GridFn: grid mismatch");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += g.values_[i];
  return *this;
}

GridFn& GridFn::operator-=(const GridFn& g) {
  if (!(grid_ == g.grid_)) throw std::invalid_argument("GridFn: grid mismatch");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] -= g.values_[i];
  return *this;
}

GridFn& GridFn::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

GridFn operator*(const GridFn& f, const GridFn& g) {
  if (!(f.grid_ == g.grid_)) throw std::invalid_argument("GridFn: grid mismatch");
  std::vector<double> v(f.values_.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = f.values_[i] * g.values_[i];
  return GridFn(f.grid_, std::move(v));
}

GridFn GridFn::map(const std::function<double(double)>& op) const {
  std::vector<double> v(values_.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = op(values_[i]);
  return GridFn(grid_, std::move(v));
}

double quadrature(const GridFn& f) {
  const auto v = f.values();
  double s = 0.5 * (v.front() + v.back());
  for (size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * f.grid().spacing();
}

double quadrature(const GridFn& f, double a, double b) {
  if (a < 0.0 || b > 1.0 || a >= b)
    throw std::invalid_argument("quadrature: interval must satisfy 0 <= a < b <= 1");
  const double h = f.grid().spacing();
  const int ia = static_cast<int>(std::ceil(a / h - 1e-12));
  const int ib = static_cast<int>(std::floor(b / h + 1e-12));
  if (ia > ib) {  // both ends inside a single cell
    return 0.5 * (f.eval(a) + f.eval(b)) * (b - a);
  }
  double s = 0.0;
  for (int i = ia; i < ib; ++i) s += 0.5 * (f[i] + f[i + 1]) * h;
  const double xa = f.grid().point(ia), xb = f.grid().point(ib);
  if (a < xa) s += 0.5 * (f.eval(a) + f[ia]) * (xa - a);
  if (b > xb) s += 0.5 * (f[ib] + f.eval(b)) * (b - xb);
  return s;
}

GridFn cumulative(const GridFn& f) {
  const auto v = f.values();
  std::vector<double> F(v.size());
  F[0] = 0.0;
  const double h = f.grid().spacing();
  for (size_t i = 1; i < v.size(); ++i)
    F[i] = F[i - 1] + 0.5 * (v[i - 1] + v[i]) * h;
  return GridFn(f.grid(), std::move(F));
}

GridFn derivative(const GridFn& f) {
  const int n = f.size();
  if (n < 3) throw std::invalid_argument("derivative: grid too coarse");
  const double h = f.grid().spacing();
  std::vector<double> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (int i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return GridFn(f.grid(), std::move(d));
}

double l2_distance(const GridFn& f, const GridFn& g, double a, double b) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("l2_distance: grid mismatch");
  GridFn d = f - g;
  return std::sqrt(quadrature(d * d, a, b));
}

double sup_norm(const GridFn& f) {
  double s = 0.0;
  for (double v : f.values()) s = std::max(s, std::fabs(v));
  return s;
}

double sup_norm(const GridFn& f, double a, double b) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const double x = f.grid().point(i);
    if (x >= a && x <= b) s = std::max(s, std::fabs(f[i]));
  }
  return s;
}

}  // namespace specdiff
