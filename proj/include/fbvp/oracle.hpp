#pragma once

// Independent checks. A trapezoidal collocation model of (L, B) measures
// kernel and cokernel dimensions without going through RK4 or [BY];
// perturbation traces probe the continuity of A -> Y and Y -> A.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fbvp/fredholm.hpp"

namespace fbvp {

inline constexpr double kOracleRankTolerance = 1e-6;
inline constexpr std::size_t kOraclePoints = 41;

struct RowBlock {
  enum class Kind { Ode, Boundary };
  Kind kind;
  Index first_row;
  Index rows;
  std::size_t subinterval = 0;  // Ode rows only
};

/// (m (N-1) + r) x (m N) matrix; unknown y_j^{(c)} sits in column j m + c.
struct CollocationSystem {
  CMatrix matrix;
  std::vector<RowBlock> row_blocks;
  Grid grid;
};

/// ODE rows: (y_{j+1} - y_j)/h + (A_{j+1} y_{j+1} + A_j y_j)/2 = 0.
/// Boundary rows: B discretized with the same derivative stencils and
/// quadrature weights the library applies to sampled functions.
CollocationSystem assemble_collocation(const ProblemSpec& problem);

struct NumericalIndex {
  Index rank = 0;
  Index dim_kernel = 0;
  Index dim_cokernel = 0;
  int index = 0;
  /// Smallest accepted over largest rejected singular value (inf if none rejected).
  double spectral_gap = 0.0;
};

/// Singular-value rank of the row-equilibrated matrix, relative tolerance.
NumericalIndex numerical_index(const CollocationSystem& sys, double tol = kOracleRankTolerance);

/// A(t) = sum_k coeffs[k] (t - a)^k with exact derivative layers 0..deriv_order.
MatrixFunction polynomial_matrix_function(const Grid& grid, const std::vector<CMatrix>& coeffs, int deriv_order);

/// A randomly drawn problem, reproducible from its seed and rebuildable on any grid.
struct TrialProblem {
  std::uint64_t seed = 0;
  Index m = 1;
  Index r = 1;
  int n = 1;
  std::vector<CMatrix> a_coeffs;
  std::string boundary_kind;
  std::function<BoundaryOperator(const Grid&)> make_boundary;

  ProblemSpec build(std::size_t grid_points) const;
};

TrialProblem random_trial_problem(std::uint64_t seed);

struct TrialOptions {
  std::size_t diagnose_points = Grid::kDefaultPoints;
  std::size_t oracle_points = kOraclePoints;
  double oracle_rank_tol = kOracleRankTolerance;
  DiagnosticOptions diagnostics;
  /// Oracle re-runs at doubled N while the spectral gap is below min_gap.
  double min_gap = 1e3;
  int max_refinements = 3;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct TrialResult {
  std::uint64_t seed = 0;
  Index m = 0;
  Index r = 0;
  int n = 1;
  std::string boundary_kind;
  FredholmReport report;
  NumericalIndex oracle;
  std::size_t oracle_points = 0;
  bool agree = false;
};

TrialResult run_index_trial(std::uint64_t seed, const TrialOptions& opts = {});

/// Trial k uses the seed derived from (seed, k); results come back in order.
std::vector<TrialResult> run_index_trials(std::uint64_t seed, int trials, const TrialOptions& opts = {});

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t k);

struct PerturbationTrace {
  std::vector<double> epsilons;
  std::vector<double> input_gaps;
  std::vector<double> output_gaps;
  std::vector<double> sup_gaps;
  /// max over entries with nonzero gaps of max(out/in, in/out).
  double ratio_bound = 0.0;
  bool truncated = false;
  std::string note;
};

/// A_eps = A0 + eps D; input gaps in W_p^{n-1}, output gaps ||Y_eps - Y_0|| in W_p^n.
PerturbationTrace perturbation_study(const MatrixFunction& A0, const MatrixFunction& D, const std::vector<double>& epsilons,
                                     int n, LpExponent p);

/// Same family, read backwards: input gaps ||Y_eps - Y_0||_{n,p}, output gaps
/// of the recovered coefficients in W_p^{n-1}.
PerturbationTrace inverse_perturbation_study(const MatrixFunction& A0, const MatrixFunction& D,
                                             const std::vector<double>& epsilons, int n, LpExponent p);

}  // namespace fbvp
