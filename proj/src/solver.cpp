#include "fbvp/solver.hpp"

namespace fbvp {

namespace {

// Appends layers 1..n to y from y^{(k+1)} = f^{(k)} - sum_j C(k,j) A^{(j)} y^{(k-j)}.
MatrixFunction with_ode_layers(MatrixFunction y, const MatrixFunction& A, const MatrixFunction& f, int n) {
  const std::size_t points = y.size();
  for (int k = 0; k < n; ++k) {
    std::vector<CMatrix> layer(f.layer(k));
    for (int j = 0; j <= k; ++j) {
      const double c = binomial(k, j);
      for (std::size_t i = 0; i < points; ++i) layer[i].noalias() -= c * (A.sample(j, i) * y.sample(k - j, i));
    }
    y.append_layer(std::move(layer));
  }
  return y;
}

CVector solve_square(const CMatrix& by, const CVector& rhs, LinearSolver method, double condition_number) {
  CVector q;
  switch (method) {
    case LinearSolver::FullPivotLU: {
      Eigen::FullPivLU<CMatrix> lu(by);
      if (!lu.isInvertible()) throw IllConditioned(condition_number);
      q = lu.solve(rhs);
      break;
    }
    case LinearSolver::PartialPivotLU:
      q = Eigen::PartialPivLU<CMatrix>(by).solve(rhs);
      break;
    case LinearSolver::HouseholderQR:
      q = Eigen::ColPivHouseholderQR<CMatrix>(by).solve(rhs);
      break;
  }
  if (!q.allFinite()) throw IllConditioned(condition_number);
  return q;
}

BvpSolution assemble(const ProblemSpec& problem, const Analysis& an, const MatrixFunction& y_part, CVector q) {
  BvpSolution sol{an.matricant.Y * CMatrix(q) + y_part, std::move(q), 0.0, 0.0};
  sol.ode_residual = ode_residual(problem, sol.y);
  sol.boundary_residual = boundary_residual(problem, sol.y);
  return sol;
}

}  // namespace

MatrixFunction particular_solution(const MatrixFunction& A, const MatrixFunction& f, const Matricant<cplx>& Y,
                                   double det_floor) {
  if (!(A.grid() == f.grid()) || !(Y.Y.grid() == A.grid())) throw DimensionMismatch("A, f and Y must share a grid");
  if (f.rows() != A.rows() || f.cols() != 1) throw DimensionMismatch("forcing must be m x 1");
  const int n = Y.Y.deriv_order();
  A.require_order(n - 1);
  f.require_order(n - 1);

  const auto inverse = invert_matrix_function(Y.Y.truncated(0), 0, det_floor);
  std::vector<CMatrix> integrand(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) integrand[i] = inverse(i) * f(i);
  const auto running = cumulative_simpson(f.grid(), integrand);
  std::vector<CMatrix> values(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) values[i] = Y.Y(i) * running[i];
  return with_ode_layers(MatrixFunction(f.grid(), std::move(values)), A, f, n);
}

MatrixFunction particular_solution(const MatrixFunction& A, const MatrixFunction& f, int n) {
  return particular_solution(A, f, compute_matricant(A, n));
}

double ode_residual(const ProblemSpec& problem, const MatrixFunction& y) {
  const MatrixFunction dy = differentiate(y.truncated(0));
  double worst = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const CMatrix res = dy.sample(1, i) + problem.A(i) * y(i) - problem.f(i);
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

double boundary_residual(const ProblemSpec& problem, const MatrixFunction& y) {
  const CVector res = apply_boundary(problem.B, y) - problem.c;
  return res.size() == 0 ? 0.0 : res.cwiseAbs().maxCoeff();
}

BvpSolution solve(const ProblemSpec& problem, const SolveOptions& opts) {
  const Analysis an = analyze(problem, opts.diagnostics);
  if (!an.report.well_posed) throw NotWellPosed(an.report);
  const MatrixFunction y_part = particular_solution(problem.A, problem.f, an.matricant, opts.diagnostics.det_floor);
  const CVector rhs = problem.c - apply_boundary(problem.B, y_part);
  CVector q = solve_square(an.characteristic.entries, rhs, opts.linear_solver, an.report.condition_number);
  return assemble(problem, an, y_part, std::move(q));
}

GeneralSolution general_solution(const ProblemSpec& problem, const SolveOptions& opts) {
  const Analysis an = analyze(problem, opts.diagnostics);
  const MatrixFunction y_part = particular_solution(problem.A, problem.f, an.matricant, opts.diagnostics.det_floor);
  const CVector rhs = problem.c - apply_boundary(problem.B, y_part);
  const CMatrix& by = an.characteristic.entries;

  // Minimum-norm least squares through the singular vectors of the accepted rank.
  Eigen::JacobiSVD<CMatrix> svd(by, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CVector q = CVector::Zero(problem.m);
  for (Index i = 0; i < an.report.rank; ++i)
    q += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(rhs) / svd.singularValues()(i));

  GeneralSolution out;
  out.residual = rhs.size() == 0 ? 0.0 : (by * q - rhs).norm();
  const double tol = opts.consistency_tol * (1.0 + problem.c.norm());
  out.solvable = out.residual <= tol;
  if (out.solvable) {
    out.particular = assemble(problem, an, y_part, std::move(q));
    out.kernel = kernel_basis(an);
  }
  return out;
}

}  // namespace fbvp
