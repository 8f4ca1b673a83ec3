#pragma once

// General boundary operators in the canonical form
//
//   B y = sum_{k<n} alpha_k y^{(k)}(a) + int_a^b Phi(t) y^{(n)}(t) dt,
//
// their action on vector and matrix functions, and the presets used for
// classical boundary conditions.

#include <vector>

#include "fbvp/funcspace.hpp"

namespace fbvp {

inline constexpr double kDefaultRankTolerance = 1e-8;

/// One smooth piece of the kernel: Phi = weight on grid points [first, last].
/// `weight` is sampled on the whole grid so single-interval pieces can borrow
/// a neighbouring sample for quadrature.
struct KernelPiece {
  MatrixFunction weight;
  std::size_t first = 0;
  std::size_t last = 0;
};

class BoundaryOperator {
 public:
  /// The zero operator C^m-valued functions -> C^r.
  BoundaryOperator(Grid grid, Index r, Index m, int n);

  /// alpha_0..alpha_{n-1} plus a kernel that is smooth on the whole interval.
  BoundaryOperator(std::vector<CMatrix> alphas, const MatrixFunction& phi);

  const Grid& grid() const noexcept { return grid_; }
  Index rows() const noexcept { return r_; }
  Index cols() const noexcept { return m_; }
  int order() const noexcept { return n_; }

  const std::vector<CMatrix>& alphas() const noexcept { return alphas_; }
  const std::vector<KernelPiece>& kernel() const noexcept { return kernel_; }

  void set_alpha(int k, CMatrix alpha);
  void add_alpha(int k, const CMatrix& alpha);
  void add_kernel_piece(KernelPiece piece);

  /// Dense samples of Phi (pieces summed; a jump node belongs to the left piece).
  MatrixFunction phi() const;

  /// Left composition G B, mapping into C^{G.rows()}.
  friend BoundaryOperator operator*(const CMatrix& g, const BoundaryOperator& b);
  friend BoundaryOperator operator*(cplx s, const BoundaryOperator& b);

 private:
  Grid grid_;
  Index r_;
  Index m_;
  int n_;
  std::vector<CMatrix> alphas_;
  std::vector<KernelPiece> kernel_;
};

/// [BY] together with its singular values (non-increasing).
struct CharacteristicMatrix {
  CMatrix entries;
  Eigen::VectorXd singular_values;
  double rank_tolerance = kDefaultRankTolerance;
};

/// B y for an m x 1 function carrying at least n derivative layers.
CVector apply_boundary(const BoundaryOperator& b, const MatrixFunction& y);

/// [BY]: column j is apply_boundary(B, column j of Y).
CharacteristicMatrix apply_boundary_matrix(const BoundaryOperator& b, const MatrixFunction& Y,
                                           double rank_tolerance = kDefaultRankTolerance);

namespace presets {

/// Contributes weight * y(t) to B y.
struct PointCondition {
  double t;
  CMatrix weight;
};

/// sum_i M_i y(t_i). Each t_i is snapped to the nearest grid point; interior
/// evaluations are written as a Taylor polynomial at a plus an integral
/// remainder against y^{(n)}.
BoundaryOperator multipoint(const Grid& grid, const std::vector<PointCondition>& points, int n);

/// B y = y(a).
BoundaryOperator initial_value(const Grid& grid, Index m, int n);
/// B y = y(b).
BoundaryOperator endpoint(const Grid& grid, Index m, int n);
/// B y = y(b) - y(a).
BoundaryOperator periodic(const Grid& grid, Index m, int n);
/// B y = M_a y(a) + M_b y(b).
BoundaryOperator two_point(const Grid& grid, const CMatrix& m_a, const CMatrix& m_b, int n);
/// B y = int_a^b K(t) y(t) dt, rewritten in canonical form.
BoundaryOperator integral(const MatrixFunction& kernel, int n);
/// B y = (y_1(a), ..., y_m(a), 0, ..., 0) in C^r, r > m.
BoundaryOperator cauchy_padded(const Grid& grid, Index r, Index m, int n);
/// B y = (y_1(a), ..., y_r(a)), r < m.
BoundaryOperator cauchy_truncated(const Grid& grid, Index r, Index m, int n);

}  // namespace presets

}  // namespace fbvp
