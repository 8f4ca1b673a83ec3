#pragma once

// The matricant Y of  Y' + A Y = 0,  Y(a) = I,  its pointwise inverse and
// the inverse map Y -> A = -Y' Y^{-1}.

#include <cstdint>
#include <cstring>
#include <vector>

#include "fbvp/funcspace.hpp"

namespace fbvp {

inline constexpr double kDefaultDetFloor = 1e-12;

template <typename Scalar>
struct Matricant {
  /// m x m samples with derivative layers 0..n.
  SampledMatrixFunction<Scalar> Y;
  std::vector<Scalar> det_profile;
  /// FNV-1a hash of the coefficient samples Y was computed from.
  std::uint64_t a_source = 0;
};

namespace detail {

template <typename Scalar>
std::uint64_t hash_samples(const SampledMatrixFunction<Scalar>& f) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& m : f.layer(0)) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
    for (std::size_t k = 0; k < static_cast<std::size_t>(m.size()) * sizeof(Scalar); ++k) {
      h ^= bytes[k];
      h *= 1099511628211ull;
    }
  }
  return h;
}

// Value at the midpoint of [t_i, t_{i+1}] by four-point Lagrange interpolation.
template <typename Matrix>
Matrix midpoint_value(const std::vector<Matrix>& s, std::size_t i) {
  const std::size_t n = s.size();
  if (i == 0) return (5.0 * s[0] + 15.0 * s[1] - 5.0 * s[2] + s[3]) / 16.0;
  if (i + 2 == n) return (s[n - 4] - 5.0 * s[n - 3] + 15.0 * s[n - 2] + 5.0 * s[n - 1]) / 16.0;
  return (-s[i - 1] + 9.0 * s[i] + 9.0 * s[i + 1] - s[i + 2]) / 16.0;
}

template <typename Matrix>
Matrix adjugate_inverse(const Matrix& y, typename Matrix::Scalar det) {
  const Index m = y.rows();
  Matrix inv(m, m);
  if (m == 1) {
    inv(0, 0) = typename Matrix::Scalar(1) / det;
  } else if (m == 2) {
    inv << y(1, 1), -y(0, 1), -y(1, 0), y(0, 0);
    inv /= det;
  } else {
    for (Index i = 0; i < 3; ++i) {
      for (Index j = 0; j < 3; ++j) {
        const Index r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        inv(i, j) = y(r0, c0) * y(r1, c1) - y(r0, c1) * y(r1, c0);
      }
    }
    inv /= det;
  }
  return inv;
}

}  // namespace detail

/// Integrates Y' = -A Y from Y(a) = I with classic RK4 on the grid of A and
/// fills derivative layers 1..order with
///   Y^{(k+1)} = -sum_{j<=k} C(k,j) A^{(j)} Y^{(k-j)}.
/// A must carry at least order-1 derivative layers.
template <typename Scalar>
Matricant<Scalar> compute_matricant(const SampledMatrixFunction<Scalar>& A, int order) {
  using Matrix = DenseMatrix<Scalar>;
  if (A.rows() != A.cols()) throw DimensionMismatch("coefficient matrix function must be square");
  if (order < 1) throw InvalidArgument("matricant order must be at least 1");
  A.require_order(order - 1);

  const Grid& grid = A.grid();
  const std::size_t n = grid.size();
  const Index m = A.rows();
  const double h = grid.step();
  const auto& a = A.layer(0);

  std::vector<Matrix> y(n);
  y[0] = Matrix::Identity(m, m);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Matrix mid = detail::midpoint_value(a, i);
    const Matrix k1 = -a[i] * y[i];
    const Matrix k2 = -mid * (y[i] + (0.5 * h) * k1);
    const Matrix k3 = -mid * (y[i] + (0.5 * h) * k2);
    const Matrix k4 = -a[i + 1] * (y[i] + h * k3);
    y[i + 1] = y[i] + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y[i + 1].allFinite()) throw BlowUp(grid.point(i));
  }

  Matricant<Scalar> out{SampledMatrixFunction<Scalar>(grid, std::move(y)), {}, detail::hash_samples(A)};
  for (int k = 0; k < order; ++k) {
    std::vector<Matrix> layer(n, Matrix::Zero(m, m));
    for (int j = 0; j <= k; ++j) {
      const double c = binomial(k, j);
      for (std::size_t i = 0; i < n; ++i) layer[i].noalias() -= c * (A.sample(j, i) * out.Y.sample(k - j, i));
    }
    out.Y.append_layer(std::move(layer));
  }
  out.det_profile.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.det_profile.push_back(out.Y(i).determinant());
  return out;
}

/// max_t |det Y(t) - exp(-int_a^t tr A)|, the Liouville-Jacobi identity for
/// Y' = -A Y.
template <typename Scalar>
double liouville_residual(const Matricant<Scalar>& Y, const SampledMatrixFunction<Scalar>& A) {
  if (!(Y.Y.grid() == A.grid())) throw DimensionMismatch("matricant and coefficient live on different grids");
  std::vector<Scalar> trace(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) trace[i] = A(i).trace();
  const auto integral = cumulative_simpson(A.grid(), trace);
  double worst = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i)
    worst = std::max(worst, static_cast<double>(std::abs(Y.det_profile[i] - std::exp(-integral[i]))));
  return worst;
}

/// True when the determinant profile never passes through (numerical) zero:
/// consecutive samples stay in the same half-plane.
template <typename Scalar>
bool det_profile_continuous(const Matricant<Scalar>& Y, double det_floor = kDefaultDetFloor) {
  for (std::size_t i = 0; i < Y.det_profile.size(); ++i) {
    if (std::abs(Y.det_profile[i]) < det_floor) return false;
    if (i > 0 && std::real(Y.det_profile[i] * std::conj(Y.det_profile[i - 1])) <= 0.0) return false;
  }
  return true;
}

/// Pointwise inverse with derivative layers 0..order from
///   Z^{(k)} = -Z sum_{j=1..k} C(k,j) Y^{(j)} Z^{(k-j)}.
/// Adjugate formula for m <= 3, pivoted elimination otherwise.
template <typename Scalar>
SampledMatrixFunction<Scalar> invert_matrix_function(const SampledMatrixFunction<Scalar>& Y, int order,
                                                     double det_floor = kDefaultDetFloor) {
  using Matrix = DenseMatrix<Scalar>;
  if (Y.rows() != Y.cols()) throw DimensionMismatch("only square matrix functions are invertible");
  Y.require_order(order);
  const Index m = Y.rows();
  const std::size_t n = Y.size();

  std::vector<Matrix> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix& yi = Y(i);
    if (m <= 3) {
      const Scalar det = yi.determinant();
      if (std::abs(det) < det_floor) throw SingularSample(Y.grid().point(i), std::abs(det));
      z[i] = detail::adjugate_inverse(yi, det);
    } else {
      Eigen::PartialPivLU<Matrix> lu(yi);
      const double ad = std::abs(lu.determinant());
      if (ad < det_floor) throw SingularSample(Y.grid().point(i), ad);
      z[i] = lu.inverse();
    }
  }
  SampledMatrixFunction<Scalar> out(Y.grid(), std::move(z));
  for (int k = 1; k <= order; ++k) {
    std::vector<Matrix> layer(n);
    for (std::size_t i = 0; i < n; ++i) {
      Matrix acc = Matrix::Zero(m, m);
      for (int j = 1; j <= k; ++j) acc.noalias() += binomial(k, j) * (Y.sample(j, i) * out.sample(k - j, i));
      layer[i] = -out(i) * acc;
    }
    out.append_layer(std::move(layer));
  }
  return out;
}

/// A = -Y' Y^{-1} with derivative layers 0..n-1, where n = Y.deriv_order().
template <typename Scalar>
SampledMatrixFunction<Scalar> recover_coefficient(const SampledMatrixFunction<Scalar>& Y,
                                                  double det_floor = kDefaultDetFloor) {
  Y.require_order(1);
  const int n = Y.deriv_order();
  const auto inverse = invert_matrix_function(Y.truncated(n - 1), n - 1, det_floor);
  return -multiply(Y.derivative(), inverse);
}

template <typename Scalar>
SampledMatrixFunction<Scalar> recover_coefficient(const Matricant<Scalar>& Y, double det_floor = kDefaultDetFloor) {
  return recover_coefficient(Y.Y, det_floor);
}

}  // namespace fbvp
