#pragma once

// Uniform grids, sampled matrix functions with derivative layers, stencil
// differentiation, composite Simpson quadrature and Sobolev norms.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

#include "fbvp/errors.hpp"

namespace fbvp {

using cplx = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = DenseMatrix<cplx>;
using CVector = DenseVector<cplx>;
using Index = Eigen::Index;

/// Lebesgue exponent p in [1, inf].
class LpExponent {
 public:
  LpExponent() = default;
  explicit LpExponent(double p) : value_(p) {
    if (!(p >= 1.0)) throw InvalidArgument("Lebesgue exponent must satisfy p >= 1");
  }
  static LpExponent infinity() { return LpExponent(std::numeric_limits<double>::infinity()); }

  double value() const noexcept { return value_; }
  bool is_infinite() const noexcept { return std::isinf(value_); }
  /// Hoelder conjugate p' with 1/p + 1/p' = 1.
  double conjugate() const noexcept {
    if (is_infinite()) return 1.0;
    if (value_ == 1.0) return std::numeric_limits<double>::infinity();
    return value_ / (value_ - 1.0);
  }

  friend bool operator==(const LpExponent&, const LpExponent&) = default;

 private:
  double value_ = 2.0;
};

/// Uniform partition of [a, b] with an odd number of points.
class Grid {
 public:
  static constexpr std::size_t kDefaultPoints = 1001;

  Grid(double a, double b, std::size_t points = kDefaultPoints, LpExponent p = LpExponent())
      : a_(a), b_(b), points_(points), p_(p) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw InvalidArgument("grid needs finite a < b");
    if (points < 5) throw InvalidArgument("grid too small: at least 5 points required");
    if (points % 2 == 0) throw InvalidArgument("grid point count must be odd for composite Simpson");
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::size_t size() const noexcept { return points_; }
  LpExponent exponent() const noexcept { return p_; }
  double step() const noexcept { return (b_ - a_) / static_cast<double>(points_ - 1); }

  double point(std::size_t i) const noexcept {
    if (i + 1 == points_) return b_;
    return a_ + static_cast<double>(i) * step();
  }

  /// Index of the grid point closest to t; t must lie in [a, b].
  std::size_t nearest_index(double t) const {
    if (!(t >= a_ && t <= b_)) throw InvalidArgument("point " + std::to_string(t) + " lies outside [a, b]");
    const double k = std::round((t - a_) / step());
    return std::min(points_ - 1, static_cast<std::size_t>(k));
  }

  Grid with_points(std::size_t points) const { return Grid(a_, b_, points, p_); }
  Grid with_exponent(LpExponent p) const { return Grid(a_, b_, points_, p); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double a_;
  double b_;
  std::size_t points_;
  LpExponent p_;
};

struct SobolevIndex {
  int order = 0;
  LpExponent p;
};

/// Matrix-valued function sampled on a grid, together with a stack of
/// derivative layers 0..deriv_order.
template <typename Scalar>
class SampledMatrixFunction {
 public:
  using scalar_type = Scalar;
  using Matrix = DenseMatrix<Scalar>;
  using Layer = std::vector<Matrix>;

  SampledMatrixFunction(Grid grid, Index rows, Index cols) : grid_(std::move(grid)), rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0) throw DimensionMismatch("matrix function needs positive dimensions");
    layers_.emplace_back(grid_.size(), Matrix::Zero(rows, cols));
  }

  SampledMatrixFunction(Grid grid, Layer samples) : grid_(std::move(grid)) {
    if (samples.size() != grid_.size()) throw DimensionMismatch("sample count does not match the grid");
    rows_ = samples.front().rows();
    cols_ = samples.front().cols();
    if (rows_ <= 0 || cols_ <= 0) throw DimensionMismatch("matrix function needs positive dimensions");
    check_layer(samples);
    layers_.push_back(std::move(samples));
  }

  /// Samples `fn(t)` at every grid point.
  template <typename F>
  static SampledMatrixFunction generate(const Grid& grid, Index rows, Index cols, F&& fn) {
    SampledMatrixFunction out(grid, rows, cols);
    for (std::size_t i = 0; i < grid.size(); ++i) out.layers_[0][i] = fn(grid.point(i));
    out.check_layer(out.layers_[0]);
    return out;
  }

  /// Constant function; all derivative layers up to `deriv_order` are zero.
  static SampledMatrixFunction constant(const Grid& grid, const Matrix& value, int deriv_order = 0) {
    SampledMatrixFunction out(grid, Layer(grid.size(), value));
    for (int k = 0; k < deriv_order; ++k) out.append_layer(Layer(grid.size(), Matrix::Zero(value.rows(), value.cols())));
    return out;
  }

  static SampledMatrixFunction zero(const Grid& grid, Index rows, Index cols, int deriv_order = 0) {
    return constant(grid, Matrix::Zero(rows, cols), deriv_order);
  }

  const Grid& grid() const noexcept { return grid_; }
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return grid_.size(); }
  int deriv_order() const noexcept { return static_cast<int>(layers_.size()) - 1; }

  const Matrix& operator()(std::size_t i) const { return layers_[0][i]; }
  const Matrix& sample(int layer, std::size_t i) const { return layers_[static_cast<std::size_t>(layer)][i]; }
  Matrix& sample(int layer, std::size_t i) { return layers_[static_cast<std::size_t>(layer)][i]; }

  const Layer& layer(int k) const {
    require_order(k);
    return layers_[static_cast<std::size_t>(k)];
  }

  void append_layer(Layer layer) {
    check_layer(layer);
    layers_.push_back(std::move(layer));
  }

  void require_order(int k) const {
    if (k < 0 || k > deriv_order()) throw MissingDerivativeLayers(k, deriv_order());
  }

  /// Copy keeping layers 0..order.
  SampledMatrixFunction truncated(int order) const {
    require_order(order);
    SampledMatrixFunction out = *this;
    out.layers_.resize(static_cast<std::size_t>(order) + 1);
    return out;
  }

  /// The derivative as a function in its own right (drops layer 0).
  SampledMatrixFunction derivative() const {
    require_order(1);
    SampledMatrixFunction out = *this;
    out.layers_.erase(out.layers_.begin());
    return out;
  }

  SampledMatrixFunction column(Index j) const {
    if (j < 0 || j >= cols_) throw DimensionMismatch("column index out of range");
    return map([j](const Matrix& m) -> Matrix { return m.col(j); });
  }

  SampledMatrixFunction block(Index i, Index j, Index rows, Index cols) const {
    return map([=](const Matrix& m) -> Matrix { return m.block(i, j, rows, cols); });
  }

  /// Applies a linear map to every sample of every layer.
  template <typename F>
  SampledMatrixFunction map(F&& fn) const {
    SampledMatrixFunction out = *this;
    for (auto& layer : out.layers_)
      for (auto& m : layer) m = fn(m);
    out.rows_ = out.layers_[0][0].rows();
    out.cols_ = out.layers_[0][0].cols();
    return out;
  }

  SampledMatrixFunction& operator*=(Scalar s) {
    for (auto& layer : layers_)
      for (auto& m : layer) m *= s;
    return *this;
  }

  SampledMatrixFunction& operator+=(const SampledMatrixFunction& o) { return combine(o, Scalar(1)); }
  SampledMatrixFunction& operator-=(const SampledMatrixFunction& o) { return combine(o, Scalar(-1)); }

  friend SampledMatrixFunction operator+(SampledMatrixFunction f, const SampledMatrixFunction& g) { return f += g; }
  friend SampledMatrixFunction operator-(SampledMatrixFunction f, const SampledMatrixFunction& g) { return f -= g; }
  friend SampledMatrixFunction operator-(SampledMatrixFunction f) { return f *= Scalar(-1); }
  friend SampledMatrixFunction operator*(Scalar s, SampledMatrixFunction f) { return f *= s; }
  friend SampledMatrixFunction operator*(SampledMatrixFunction f, Scalar s) { return f *= s; }

  /// Pointwise product with a constant matrix on the right (e.g. Y(t) q).
  friend SampledMatrixFunction operator*(const SampledMatrixFunction& f, const Matrix& c) {
    if (f.cols_ != c.rows()) throw DimensionMismatch("constant right factor has wrong row count");
    return f.map([&c](const Matrix& m) -> Matrix { return m * c; });
  }
  friend SampledMatrixFunction operator*(const Matrix& c, const SampledMatrixFunction& f) {
    if (c.cols() != f.rows_) throw DimensionMismatch("constant left factor has wrong column count");
    return f.map([&c](const Matrix& m) -> Matrix { return c * m; });
  }

 private:
  void check_layer(const Layer& layer) const {
    if (layer.size() != grid_.size()) throw DimensionMismatch("layer sample count does not match the grid");
    for (const auto& m : layer)
      if (m.rows() != rows_ || m.cols() != cols_) throw DimensionMismatch("layer samples have inconsistent dimensions");
  }

  // Layers beyond the common derivative order are dropped.
  SampledMatrixFunction& combine(const SampledMatrixFunction& o, Scalar sign) {
    if (!(grid_ == o.grid_)) throw DimensionMismatch("functions live on different grids");
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("functions have different dimensions");
    layers_.resize(std::min(layers_.size(), o.layers_.size()));
    for (std::size_t k = 0; k < layers_.size(); ++k)
      for (std::size_t i = 0; i < layers_[k].size(); ++i) layers_[k][i] += sign * o.layers_[k][i];
    return *this;
  }

  Grid grid_;
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Layer> layers_;
};

using MatrixFunction = SampledMatrixFunction<cplx>;

// --------------------------------------------------------------------------
// Stencils and quadrature

/// Five-point first-derivative stencil at grid point i (weights include 1/h).
struct DerivativeStencil {
  std::size_t first = 0;
  std::array<double, 5> weights{};
};

inline DerivativeStencil derivative_stencil(const Grid& grid, std::size_t i) {
  const std::size_t n = grid.size();
  const double s = 1.0 / (12.0 * grid.step());
  DerivativeStencil st;
  std::array<double, 5> w;
  if (i == 0) {
    w = {-25, 48, -36, 16, -3};
  } else if (i == 1) {
    w = {-3, -10, 18, -6, 1};
  } else if (i + 2 == n) {
    w = {-1, 6, -18, 10, 3};
    st.first = n - 5;
  } else if (i + 1 == n) {
    w = {3, -16, 36, -48, 25};
    st.first = n - 5;
  } else {
    w = {1, -8, 0, 8, -1};
    st.first = i - 2;
  }
  for (std::size_t k = 0; k < 5; ++k) st.weights[k] = w[k] * s;
  return st;
}

/// Appends one derivative layer computed from the top layer by fourth-order
/// finite differences (centered inside, one-sided at the ends).
template <typename Scalar>
SampledMatrixFunction<Scalar> differentiate(const SampledMatrixFunction<Scalar>& f) {
  using Matrix = DenseMatrix<Scalar>;
  const Grid& grid = f.grid();
  const auto& top = f.layer(f.deriv_order());
  std::vector<Matrix> next(grid.size(), Matrix::Zero(f.rows(), f.cols()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const DerivativeStencil st = derivative_stencil(grid, i);
    for (std::size_t k = 0; k < 5; ++k)
      if (st.weights[k] != 0.0) next[i] += st.weights[k] * top[st.first + k];
  }
  SampledMatrixFunction<Scalar> out = f;
  out.append_layer(std::move(next));
  return out;
}

template <typename Scalar>
SampledMatrixFunction<Scalar> differentiate(SampledMatrixFunction<Scalar> f, int times) {
  for (int k = 0; k < times; ++k) f = differentiate(f);
  return f;
}

/// Quadrature weights for the integral over grid points [first, last].
/// Even interval counts use composite Simpson; odd counts close with a
/// Simpson 3/8 panel; a single interval uses a three-point rule that borrows
/// the next (or previous) grid point, so the integrand must be smooth there.
inline std::vector<std::pair<std::size_t, double>> simpson_rule(const Grid& grid, std::size_t first, std::size_t last) {
  if (last < first || last >= grid.size()) throw InvalidArgument("quadrature range outside the grid");
  const double h = grid.step();
  std::vector<std::pair<std::size_t, double>> rule;
  const std::size_t intervals = last - first;
  if (intervals == 0) return rule;
  if (intervals == 1) {
    if (last + 1 < grid.size()) {
      rule = {{first, 5 * h / 12}, {last, 8 * h / 12}, {last + 1, -h / 12}};
    } else {
      rule = {{first - 1, -h / 12}, {first, 8 * h / 12}, {last, 5 * h / 12}};
    }
    return rule;
  }
  const std::size_t simpson_end = (intervals % 2 == 0) ? last : last - 3;
  for (std::size_t i = first; i + 2 <= simpson_end; i += 2) {
    rule.emplace_back(i, h / 3);
    rule.emplace_back(i + 1, 4 * h / 3);
    rule.emplace_back(i + 2, h / 3);
  }
  if (simpson_end != last) {
    const std::size_t s = simpson_end;
    rule.emplace_back(s, 3 * h / 8);
    rule.emplace_back(s + 1, 9 * h / 8);
    rule.emplace_back(s + 2, 9 * h / 8);
    rule.emplace_back(s + 3, 3 * h / 8);
  }
  return rule;
}

namespace detail {

template <typename T>
T zero_like(const T& v) {
  if constexpr (requires { v.rows(); v.cols(); }) {
    return T::Zero(v.rows(), v.cols());
  } else {
    return T(0);
  }
}

}  // namespace detail

/// Integral over the whole grid of sampled values (scalars or matrices).
template <typename T>
T simpson(const Grid& grid, const std::vector<T>& values) {
  T acc = detail::zero_like(values.front());
  for (const auto& [i, w] : simpson_rule(grid, 0, grid.size() - 1)) acc += w * values[i];
  return acc;
}

/// Running integrals from a to every grid point. Even points use composite
/// Simpson; odd points add a three-point single-interval panel.
template <typename T>
std::vector<T> cumulative_simpson(const Grid& grid, const std::vector<T>& values) {
  if (values.size() != grid.size()) throw DimensionMismatch("sample count does not match the grid");
  const double h = grid.step();
  std::vector<T> out(values.size(), detail::zero_like(values.front()));
  for (std::size_t i = 2; i < values.size(); i += 2)
    out[i] = out[i - 2] + (h / 3) * (values[i - 2] + 4.0 * values[i - 1] + values[i]);
  for (std::size_t i = 1; i < values.size(); i += 2)
    out[i] = out[i - 1] + (h / 12) * (5.0 * values[i - 1] + 8.0 * values[i] - values[i + 1]);
  return out;
}

// --------------------------------------------------------------------------
// Norms

/// L_p norm of derivative layer `k`: the sum over entries of the scalar L_p
/// norms. For p = inf the per-entry norm is the sample maximum, a lower bound
/// of the essential supremum.
template <typename Scalar>
double lp_norm(const SampledMatrixFunction<Scalar>& f, LpExponent p, int k = 0) {
  const auto& layer = f.layer(k);
  const Grid& grid = f.grid();
  double total = 0.0;
  for (Index r = 0; r < f.rows(); ++r) {
    for (Index c = 0; c < f.cols(); ++c) {
      if (p.is_infinite()) {
        double mx = 0.0;
        for (const auto& m : layer) mx = std::max(mx, static_cast<double>(std::abs(m(r, c))));
        total += mx;
      } else {
        std::vector<double> powered(layer.size());
        for (std::size_t i = 0; i < layer.size(); ++i) powered[i] = std::pow(std::abs(layer[i](r, c)), p.value());
        total += std::pow(std::max(0.0, simpson(grid, powered)), 1.0 / p.value());
      }
    }
  }
  return total;
}

/// W_p^n norm: the sum of the L_p norms of derivative layers 0..n.
template <typename Scalar>
double sobolev_norm(const SampledMatrixFunction<Scalar>& f, SobolevIndex idx) {
  if (idx.order < 0) throw InvalidArgument("Sobolev order must be non-negative");
  f.require_order(idx.order);
  double total = 0.0;
  for (int k = 0; k <= idx.order; ++k) total += lp_norm(f, idx.p, k);
  return total;
}

template <typename Scalar>
double sobolev_norm(const SampledMatrixFunction<Scalar>& f, int order, LpExponent p) {
  return sobolev_norm(f, SobolevIndex{order, p});
}

/// Largest entry modulus over all samples of layer k.
template <typename Scalar>
double max_abs(const SampledMatrixFunction<Scalar>& f, int k = 0) {
  double mx = 0.0;
  for (const auto& m : f.layer(k)) mx = std::max(mx, static_cast<double>(m.cwiseAbs().maxCoeff()));
  return mx;
}

inline double binomial(int n, int k) {
  double b = 1.0;
  for (int j = 1; j <= k; ++j) b = b * static_cast<double>(n - k + j) / static_cast<double>(j);
  return b;
}

/// Pointwise product; derivative layers by the Leibniz rule up to the
/// smaller derivative order of the two factors.
template <typename Scalar>
SampledMatrixFunction<Scalar> multiply(const SampledMatrixFunction<Scalar>& f, const SampledMatrixFunction<Scalar>& g) {
  using Matrix = DenseMatrix<Scalar>;
  if (!(f.grid() == g.grid())) throw DimensionMismatch("functions live on different grids");
  if (f.cols() != g.rows()) throw DimensionMismatch("inner dimensions do not match");
  const int order = std::min(f.deriv_order(), g.deriv_order());
  const std::size_t n = f.size();
  std::vector<Matrix> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = f.sample(0, i) * g.sample(0, i);
  SampledMatrixFunction<Scalar> out(f.grid(), std::move(base));
  for (int k = 1; k <= order; ++k) {
    std::vector<Matrix> layer(n, Matrix::Zero(f.rows(), g.cols()));
    for (int j = 0; j <= k; ++j) {
      const double c = binomial(k, j);
      for (std::size_t i = 0; i < n; ++i) layer[i].noalias() += c * (f.sample(j, i) * g.sample(k - j, i));
    }
    out.append_layer(std::move(layer));
  }
  return out;
}

}  // namespace fbvp
