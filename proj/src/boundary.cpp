#include "fbvp/boundary.hpp"

#include <cmath>

namespace fbvp {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

}  // namespace

BoundaryOperator::BoundaryOperator(Grid grid, Index r, Index m, int n) : grid_(std::move(grid)), r_(r), m_(m), n_(n) {
  if (r <= 0 || m <= 0) throw DimensionMismatch("boundary operator needs positive dimensions");
  if (n < 1) throw InvalidArgument("boundary operator order must be at least 1");
  alphas_.assign(static_cast<std::size_t>(n), CMatrix::Zero(r, m));
}

BoundaryOperator::BoundaryOperator(std::vector<CMatrix> alphas, const MatrixFunction& phi)
    : BoundaryOperator(phi.grid(), phi.rows(), phi.cols(), static_cast<int>(alphas.size())) {
  for (std::size_t k = 0; k < alphas.size(); ++k) set_alpha(static_cast<int>(k), std::move(alphas[k]));
  add_kernel_piece({phi.truncated(0), 0, grid_.size() - 1});
}

void BoundaryOperator::set_alpha(int k, CMatrix alpha) {
  if (k < 0 || k >= n_) throw InvalidArgument("alpha index out of range");
  if (alpha.rows() != r_ || alpha.cols() != m_) throw DimensionMismatch("alpha has wrong dimensions");
  alphas_[static_cast<std::size_t>(k)] = std::move(alpha);
}

void BoundaryOperator::add_alpha(int k, const CMatrix& alpha) {
  if (k < 0 || k >= n_) throw InvalidArgument("alpha index out of range");
  if (alpha.rows() != r_ || alpha.cols() != m_) throw DimensionMismatch("alpha has wrong dimensions");
  alphas_[static_cast<std::size_t>(k)] += alpha;
}

void BoundaryOperator::add_kernel_piece(KernelPiece piece) {
  if (!(piece.weight.grid() == grid_)) throw DimensionMismatch("kernel lives on a different grid");
  if (piece.weight.rows() != r_ || piece.weight.cols() != m_) throw DimensionMismatch("kernel has wrong dimensions");
  if (piece.first > piece.last || piece.last >= grid_.size()) throw InvalidArgument("kernel piece range outside grid");
  if (piece.first == piece.last) return;  // measure zero
  piece.weight = piece.weight.truncated(0);
  kernel_.push_back(std::move(piece));
}

MatrixFunction BoundaryOperator::phi() const {
  std::vector<CMatrix> dense(grid_.size(), CMatrix::Zero(r_, m_));
  for (const auto& piece : kernel_)
    for (std::size_t i = piece.first; i <= piece.last; ++i) dense[i] += piece.weight(i);
  return MatrixFunction(grid_, std::move(dense));
}

BoundaryOperator operator*(const CMatrix& g, const BoundaryOperator& b) {
  if (g.cols() != b.r_) throw DimensionMismatch("left factor does not match boundary operator rows");
  BoundaryOperator out(b.grid_, g.rows(), b.m_, b.n_);
  for (int k = 0; k < b.n_; ++k) out.alphas_[static_cast<std::size_t>(k)] = g * b.alphas_[static_cast<std::size_t>(k)];
  for (const auto& piece : b.kernel_) out.kernel_.push_back({g * piece.weight, piece.first, piece.last});
  return out;
}

BoundaryOperator operator*(cplx s, const BoundaryOperator& b) {
  BoundaryOperator out = b;
  for (auto& a : out.alphas_) a *= s;
  for (auto& piece : out.kernel_) piece.weight *= s;
  return out;
}

CVector apply_boundary(const BoundaryOperator& b, const MatrixFunction& y) {
  if (!(y.grid() == b.grid())) throw DimensionMismatch("function and boundary operator live on different grids");
  if (y.rows() != b.cols() || y.cols() != 1) throw DimensionMismatch("boundary operator expects an m x 1 function");
  const int n = b.order();
  y.require_order(n);
  CVector out = CVector::Zero(b.rows());
  for (int k = 0; k < n; ++k) out.noalias() += b.alphas()[static_cast<std::size_t>(k)] * y.sample(k, 0);
  for (const auto& piece : b.kernel())
    for (const auto& [i, w] : simpson_rule(b.grid(), piece.first, piece.last))
      out.noalias() += w * (piece.weight(i) * y.sample(n, i));
  return out;
}

CharacteristicMatrix apply_boundary_matrix(const BoundaryOperator& b, const MatrixFunction& Y, double rank_tolerance) {
  if (Y.rows() != b.cols()) throw DimensionMismatch("matrix function rows do not match boundary operator");
  CharacteristicMatrix by;
  by.entries = CMatrix::Zero(b.rows(), Y.cols());
  for (Index j = 0; j < Y.cols(); ++j) by.entries.col(j) = apply_boundary(b, Y.column(j));
  by.singular_values = Eigen::JacobiSVD<CMatrix>(by.entries).singularValues();
  by.rank_tolerance = rank_tolerance;
  return by;
}

namespace presets {

BoundaryOperator multipoint(const Grid& grid, const std::vector<PointCondition>& points, int n) {
  if (points.empty()) throw InvalidArgument("multipoint condition needs at least one point");
  const Index r = points.front().weight.rows();
  const Index m = points.front().weight.cols();
  BoundaryOperator b(grid, r, m, n);
  for (const auto& pc : points) {
    if (pc.weight.rows() != r || pc.weight.cols() != m) throw DimensionMismatch("point weights differ in dimensions");
    const std::size_t j = grid.nearest_index(pc.t);
    if (pc.weight.isZero(0.0)) continue;
    const double tj = grid.point(j);
    const double dt = tj - grid.a();
    // y(t_j) = sum_k dt^k/k! y^{(k)}(a) + int_a^{t_j} (t_j - s)^{n-1}/(n-1)! y^{(n)}(s) ds
    double power = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k == 0 || j > 0) b.add_alpha(k, (power / factorial(k)) * pc.weight);
      power *= dt;
    }
    if (j == 0) continue;
    const double scale = 1.0 / factorial(n - 1);
    MatrixFunction weight = MatrixFunction::generate(grid, r, m, [&](double s) -> CMatrix {
      return (scale * std::pow(tj - s, n - 1)) * pc.weight;
    });
    b.add_kernel_piece({std::move(weight), 0, j});
  }
  return b;
}

BoundaryOperator initial_value(const Grid& grid, Index m, int n) {
  BoundaryOperator b(grid, m, m, n);
  b.set_alpha(0, CMatrix::Identity(m, m));
  return b;
}

BoundaryOperator endpoint(const Grid& grid, Index m, int n) {
  return multipoint(grid, {{grid.b(), CMatrix::Identity(m, m)}}, n);
}

BoundaryOperator periodic(const Grid& grid, Index m, int n) {
  return multipoint(grid, {{grid.a(), -CMatrix::Identity(m, m)}, {grid.b(), CMatrix::Identity(m, m)}}, n);
}

BoundaryOperator two_point(const Grid& grid, const CMatrix& m_a, const CMatrix& m_b, int n) {
  if (m_a.rows() != m_b.rows() || m_a.cols() != m_b.cols()) throw DimensionMismatch("M_a and M_b differ in dimensions");
  return multipoint(grid, {{grid.a(), m_a}, {grid.b(), m_b}}, n);
}

BoundaryOperator integral(const MatrixFunction& kernel, int n) {
  const Grid& grid = kernel.grid();
  const Index r = kernel.rows(), m = kernel.cols();
  const std::size_t points = grid.size();
  BoundaryOperator b(grid, r, m, n);

  // moments[j](t) = K(t) (t - a)^j
  std::vector<std::vector<CMatrix>> moments(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto& mj = moments[static_cast<std::size_t>(j)];
    mj.resize(points);
    for (std::size_t i = 0; i < points; ++i) mj[i] = std::pow(grid.point(i) - grid.a(), j) * kernel(i);
  }
  for (int k = 0; k < n; ++k) b.set_alpha(k, simpson(grid, moments[static_cast<std::size_t>(k)]) / factorial(k));

  // Phi(s) = 1/(n-1)! int_s^b K(t) (t - s)^{n-1} dt, expanded binomially in (t - a) and (s - a).
  std::vector<CMatrix> phi(points, CMatrix::Zero(r, m));
  for (int j = 0; j < n; ++j) {
    const auto cumulative = cumulative_simpson(grid, moments[static_cast<std::size_t>(j)]);
    const CMatrix& total = cumulative.back();
    const double c = binomial(n - 1, j) / factorial(n - 1);
    for (std::size_t i = 0; i < points; ++i) {
      const double sa = grid.point(i) - grid.a();
      phi[i] += (c * std::pow(-sa, n - 1 - j)) * (total - cumulative[i]);
    }
  }
  b.add_kernel_piece({MatrixFunction(grid, std::move(phi)), 0, points - 1});
  return b;
}

BoundaryOperator cauchy_padded(const Grid& grid, Index r, Index m, int n) {
  if (r <= m) throw InvalidArgument("cauchy_padded needs r > m");
  BoundaryOperator b(grid, r, m, n);
  CMatrix alpha = CMatrix::Zero(r, m);
  alpha.topRows(m) = CMatrix::Identity(m, m);
  b.set_alpha(0, std::move(alpha));
  return b;
}

BoundaryOperator cauchy_truncated(const Grid& grid, Index r, Index m, int n) {
  if (r >= m) throw InvalidArgument("cauchy_truncated needs r < m");
  BoundaryOperator b(grid, r, m, n);
  CMatrix alpha = CMatrix::Zero(r, m);
  alpha.leftCols(r) = CMatrix::Identity(r, r);
  b.set_alpha(0, std::move(alpha));
  return b;
}

}  // namespace presets

}  // namespace fbvp
