#include "fbvp/fredholm.hpp"

#include <limits>

namespace fbvp {

namespace {

// Operator size of B times the largest layer of Y; bounds |[BY]| without cancellation.
double boundary_scale(const BoundaryOperator& B, const MatrixFunction& Y) {
  double size = 0.0;
  for (const auto& alpha : B.alphas()) size += alpha.norm();
  const MatrixFunction phi = B.phi();
  std::vector<double> norms(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) norms[i] = phi(i).norm();
  size += simpson(phi.grid(), norms);
  double y_max = 0.0;
  for (int k = 0; k <= Y.deriv_order(); ++k)
    for (std::size_t i = 0; i < Y.size(); ++i) y_max = std::max(y_max, Y.sample(k, i).norm());
  return size * y_max;
}

}  // namespace

Analysis analyze(const ProblemSpec& problem, const DiagnosticOptions& opts) {
  problem.validate();
  Matricant<cplx> matricant = compute_matricant(problem.A, problem.n);
  CharacteristicMatrix by = apply_boundary_matrix(problem.B, matricant.Y, opts.rank_tol);

  const Index r = problem.r, m = problem.m;
  Eigen::JacobiSVD<CMatrix> svd(by.entries, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = by.singular_values;
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double threshold = opts.rank_tol * sigma_max * static_cast<double>(std::max(r, m));
  const double floor = opts.det_floor * boundary_scale(problem.B, matricant.Y);

  FredholmReport rep;
  rep.m = m;
  rep.r = r;
  rep.n = problem.n;
  rep.p = problem.grid.exponent().value();
  rep.index = static_cast<int>(m - r);
  rep.rank_tolerance = opts.rank_tol;
  rep.singular_values = sigma;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma_max > 0.0 && sigma(i) > threshold && sigma(i) > floor) ++rep.rank;
    if (sigma_max > 0.0 && sigma(i) > 0.1 * threshold && sigma(i) < 10.0 * threshold) rep.marginal_rank = true;
  }
  rep.dim_kernel = m - rep.rank;
  rep.dim_cokernel = r - rep.rank;
  rep.well_posed = (r == m) && (rep.rank == m);
  if (r == m) rep.det_BY = Eigen::FullPivLU<CMatrix>(by.entries).determinant();
  rep.condition_number = rep.well_posed ? sigma(0) / sigma(sigma.size() - 1) : std::numeric_limits<double>::infinity();

  CMatrix null_space = svd.matrixV().rightCols(rep.dim_kernel);
  return Analysis{std::move(rep), std::move(matricant), std::move(by), std::move(null_space)};
}

FredholmReport diagnose(const ProblemSpec& problem, const DiagnosticOptions& opts) {
  return analyze(problem, opts).report;
}

std::vector<MatrixFunction> kernel_basis(const Analysis& analysis) {
  std::vector<MatrixFunction> basis;
  for (Index j = 0; j < analysis.null_space.cols(); ++j)
    basis.push_back(analysis.matricant.Y * CMatrix(analysis.null_space.col(j)));
  return basis;
}

std::vector<MatrixFunction> kernel_basis(const ProblemSpec& problem, const DiagnosticOptions& opts) {
  return kernel_basis(analyze(problem, opts));
}

}  // namespace fbvp
