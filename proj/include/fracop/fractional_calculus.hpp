#pragma once

#include "fracop/core.hpp"

#include <algorithm>
#include <iosfwd>
#include <string>
#include <vector>

namespace fracop {

/// Discrete time axis on [0, T]: strictly increasing, starts at 0, >= 2 nodes.
class TimeGrid {
public:
  explicit TimeGrid(std::vector<double> nodes);

  /// n equal steps on [0, T].
  static TimeGrid uniform(double T, Index n);
  /// t_j = T (j/n)^r, clustering nodes at t = 0 for r > 1.
  static TimeGrid graded(double T, Index n, double r);
  /// 0 followed by n nodes geometrically spaced from t_first to T.
  static TimeGrid geometric(double t_first, double T, Index n);

  Index size() const noexcept { return static_cast<Index>(nodes_.size()); }
  double operator[](Index i) const { return nodes_[static_cast<std::size_t>(i)]; }
  double step(Index i) const { return (*this)[i + 1] - (*this)[i]; }
  double final_time() const noexcept { return nodes_.back(); }
  double min_step() const;
  const std::vector<double>& nodes() const noexcept { return nodes_; }

  /// Every other node; the inverse of one uniform refinement.
  TimeGrid coarsened() const;
  /// Midpoints inserted between all nodes.
  TimeGrid refined() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
  std::vector<double> nodes_;
};

/// State-vector trajectory sampled on a TimeGrid; column i is the state at t_i.
template <typename Scalar>
class GridFunction {
public:
  using Vector = VectorX<Scalar>;
  using Matrix = MatrixX<Scalar>;

  GridFunction(TimeGrid grid, Index dim)
      : grid_(std::move(grid)), values_(Matrix::Zero(dim, grid_.size())) {}

  GridFunction(TimeGrid grid, Matrix values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.cols() != grid_.size()) {
      throw DomainError("GridFunction: value count does not match grid size");
    }
  }

  /// Samples f(t) at every grid node.
  template <typename F>
  static GridFunction sample(const TimeGrid& grid, Index dim, F&& f) {
    GridFunction out(grid, dim);
    for (Index i = 0; i < grid.size(); ++i) {
      Vector v = f(grid[i]);
      if (v.size() != dim) {
        throw DomainError("GridFunction::sample: callback returned wrong dimension");
      }
      out.values_.col(i) = v;
    }
    return out;
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  Index dim() const noexcept { return values_.rows(); }
  Index size() const noexcept { return values_.cols(); }
  double time(Index i) const { return grid_[i]; }

  auto operator[](Index i) { return values_.col(i); }
  auto operator[](Index i) const { return values_.col(i); }

  Matrix& values() noexcept { return values_; }
  const Matrix& values() const noexcept { return values_; }

  /// max_i ||u(t_i)||_2
  double sup_norm() const {
    double s = 0.0;
    for (Index i = 0; i < size(); ++i) {
      s = std::max(s, values_.col(i).norm());
    }
    return s;
  }

  GridFunction& operator+=(const GridFunction& o) {
    check_compatible(o);
    values_ += o.values_;
    return *this;
  }
  GridFunction& operator-=(const GridFunction& o) {
    check_compatible(o);
    values_ -= o.values_;
    return *this;
  }
  GridFunction& operator*=(Scalar s) {
    values_ *= s;
    return *this;
  }
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(Scalar s, GridFunction a) { return a *= s; }

  /// Subtracts a constant vector from every sample (u - a).
  GridFunction minus_constant(const Vector& c) const {
    GridFunction out = *this;
    out.values_.colwise() -= c;
    return out;
  }

private:
  void check_compatible(const GridFunction& o) const {
    if (o.dim() != dim() || !(o.grid() == grid())) {
      throw DomainError("GridFunction: incompatible operands");
    }
  }

  TimeGrid grid_;
  Matrix values_;
};

/// Real part of a complex trajectory.
GridFunction<double> real_part(const GridFunction<Complex>& u);
/// Largest imaginary component, used to confirm real problems stay real.
double max_imag(const GridFunction<Complex>& u);
GridFunction<Complex> to_complex(const GridFunction<double>& u);

// phi_1(z) = (e^z - 1)/z, phi_2(z) = (e^z - 1 - z)/z^2, entire and evaluated
// by Taylor series near the origin.
Complex phi1(Complex z);
Complex phi2(Complex z);

namespace detail {

// Product-integration weights on one interval [t_j, t_{j+1}] seen from t_i, in
// the variable sigma = t_i - s in [a, b]: left multiplies v_j (hat (sigma-a)/h),
// right multiplies v_{j+1} (hat (b-sigma)/h), both against sigma^(p-1).
struct HatWeights {
  double left;
  double right;
};
HatWeights product_weights(double a, double b, double p);

}  // namespace detail

/// Riemann-Liouville integral J^beta v at every node by product integration
/// against the piecewise-linear interpolant of v. beta in (0, 1].
template <typename Scalar>
GridFunction<Scalar> riemann_liouville_integral(const GridFunction<Scalar>& v, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw DomainError("riemann_liouville_integral: beta must lie in (0,1]");
  }
  if (!v.values().allFinite()) {
    throw DomainError("riemann_liouville_integral: non-finite samples");
  }
  const TimeGrid& grid = v.grid();
  GridFunction<Scalar> w(grid, v.dim());
  const double scale = rgamma(beta);
  for (Index i = 1; i < grid.size(); ++i) {
    VectorX<Scalar> acc = VectorX<Scalar>::Zero(v.dim());
    const double ti = grid[i];
    for (Index j = 0; j < i; ++j) {
      const auto hw = detail::product_weights(ti - grid[j + 1], ti - grid[j], beta);
      acc += hw.left * v[j] + hw.right * v[j + 1];
    }
    w[i] = scale * acc;
  }
  return w;
}

/// L1 discretization of the Caputo derivative of order alpha. The value at
/// t_0 = 0 is set to zero by convention.
template <typename Scalar>
GridFunction<Scalar> caputo_l1(const GridFunction<Scalar>& u, const FractionalOrder& order) {
  const double alpha = order.alpha();
  const TimeGrid& grid = u.grid();
  GridFunction<Scalar> d(grid, u.dim());
  const double scale = rgamma(2.0 - alpha);
  for (Index i = 1; i < grid.size(); ++i) {
    VectorX<Scalar> acc = VectorX<Scalar>::Zero(u.dim());
    const double ti = grid[i];
    for (Index j = 0; j < i; ++j) {
      const double h = grid.step(j);
      // int_{t_j}^{t_{j+1}} (t_i - s)^{-alpha} ds * (1 - alpha)
      const double wgt = pow_diff(ti - grid[j], ti - grid[j + 1], 1.0 - alpha);
      acc += (wgt / h) * (u[j + 1] - u[j]);
    }
    d[i] = scale * acc;
  }
  return d;
}

/// Truncated Laplace transform int_0^T e^{-lambda t} u(t) dt.
struct LaplaceValue {
  CVector value;
  /// e^{-Re(lambda) T} sup||u|| / Re(lambda): bound on the discarded tail if u
  /// stays below its sampled sup beyond T.
  double tail_bound;
};

/// Product-trapezoid quadrature: e^{-lambda t} integrated exactly against the
/// piecewise-linear interpolant of u.
template <typename Scalar>
LaplaceValue numerical_laplace(const GridFunction<Scalar>& u, Complex lambda) {
  if (!(lambda.real() > 0.0)) {
    throw DomainError("numerical_laplace: Re(lambda) must be positive");
  }
  const TimeGrid& grid = u.grid();
  CVector acc = CVector::Zero(u.dim());
  for (Index j = 0; j + 1 < grid.size(); ++j) {
    const double h = grid.step(j);
    const Complex z = -lambda * h;
    const Complex p1 = phi1(z);
    const Complex p2 = phi2(z);
    const Complex e = std::exp(-lambda * grid[j]);
    acc += (e * h * p2) * u[j].template cast<Complex>() +
           (e * h * (p1 - p2)) * u[j + 1].template cast<Complex>();
  }
  const double tail = std::exp(-lambda.real() * grid.final_time()) * u.sup_norm() / lambda.real();
  return {acc, tail};
}

// CSV: header "t,v_0,...,v_{N-1}"; complex trajectories use adjacent
// "v_k_re,v_k_im" columns. Numbers are printed with 17 significant digits in
// the C locale.
void write_csv(std::ostream& os, const GridFunction<double>& u);
void write_csv(std::ostream& os, const GridFunction<Complex>& u);
GridFunction<double> read_csv(std::istream& is);

}  // namespace fracop
