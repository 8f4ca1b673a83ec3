#pragma once

// Inhomogeneous problems: variation of constants for a particular solution,
// the unique solution of a well-posed problem, and the affine solution set
// of a rank-deficient one.

#include <optional>
#include <vector>

#include "fbvp/fredholm.hpp"

namespace fbvp {

/// Raised by solve() when r != m or [BY] is degenerate.
class NotWellPosed : public Error {
 public:
  explicit NotWellPosed(FredholmReport report)
      : Error("boundary-value problem is not well posed (index " + std::to_string(report.index) + ", rank " +
              std::to_string(report.rank) + ")"),
        report_(std::move(report)) {}

  const FredholmReport& report() const noexcept { return report_; }

 private:
  FredholmReport report_;
};

/// [BY] passed the rank test but the linear solve still failed.
class IllConditioned : public Error {
 public:
  explicit IllConditioned(double condition_number)
      : Error("characteristic matrix too ill-conditioned to solve (condition number " +
              std::to_string(condition_number) + ")"),
        condition_number_(condition_number) {}
  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

enum class LinearSolver { FullPivotLU, PartialPivotLU, HouseholderQR };

struct SolveOptions {
  DiagnosticOptions diagnostics;
  LinearSolver linear_solver = LinearSolver::FullPivotLU;
  /// Range-membership tolerance is consistency_tol * (1 + |c|).
  double consistency_tol = 1e-7;
};

struct BvpSolution {
  MatrixFunction y;  // m x 1, derivative layers 0..n
  CVector q;         // y = Y q + y_part
  /// max |D y + A y - f| with D the stencil derivative of the samples.
  double ode_residual = 0.0;
  /// max |B y - c|.
  double boundary_residual = 0.0;
};

struct GeneralSolution {
  bool solvable = false;
  /// |[BY] q - (c - B y_part)| at the minimum-norm least-squares q.
  double residual = 0.0;
  std::optional<BvpSolution> particular;
  std::vector<MatrixFunction> kernel;
};

/// y_part(t) = Y(t) int_a^t Y^{-1}(s) f(s) ds, with layers 1..n from
/// y' = f - A y and the Leibniz rule.
MatrixFunction particular_solution(const MatrixFunction& A, const MatrixFunction& f, const Matricant<cplx>& Y,
                                   double det_floor = kDefaultDetFloor);
MatrixFunction particular_solution(const MatrixFunction& A, const MatrixFunction& f, int n = 1);

BvpSolution solve(const ProblemSpec& problem, const SolveOptions& opts = {});

GeneralSolution general_solution(const ProblemSpec& problem, const SolveOptions& opts = {});

/// Measured residuals of a candidate solution.
double ode_residual(const ProblemSpec& problem, const MatrixFunction& y);
double boundary_residual(const ProblemSpec& problem, const MatrixFunction& y);

}  // namespace fbvp
