#pragma once

// Fredholm diagnostics of (L, B): index m - r, kernel and cokernel
// dimensions read off the rank of [BY], the well-posedness verdict and an
// explicit kernel basis y_i = Y q_i.

#include <optional>
#include <vector>

#include "fbvp/matricant.hpp"
#include "fbvp/problem.hpp"

namespace fbvp {

struct DiagnosticOptions {
  /// Relative: sigma_i counts when sigma_i > rank_tol * sigma_max * max(r, m).
  double rank_tol = kDefaultRankTolerance;
  /// Absolute, in units of (sum ||alpha_k|| + int ||Phi||) * max_k sup ||Y^(k)||:
  /// singular values below it are cancellation noise and never count.
  double det_floor = kDefaultDetFloor;
};

struct FredholmReport {
  Index m = 0;
  Index r = 0;
  int n = 1;
  double p = 2.0;
  int index = 0;
  Index rank = 0;
  Index dim_kernel = 0;
  Index dim_cokernel = 0;
  bool well_posed = false;
  std::optional<cplx> det_BY;  // present iff r = m
  double condition_number = 0.0;  // +inf unless r = m and [BY] has full rank
  double rank_tolerance = kDefaultRankTolerance;
  /// Some singular value lies within a factor 10 of the rank threshold.
  bool marginal_rank = false;
  Eigen::VectorXd singular_values;
};

/// Everything diagnose computes, kept for reuse by kernel_basis and solve.
struct Analysis {
  FredholmReport report;
  Matricant<cplx> matricant;
  CharacteristicMatrix characteristic;
  /// m x dim_kernel, orthonormal right-singular vectors spanning ker [BY].
  CMatrix null_space;
};

Analysis analyze(const ProblemSpec& problem, const DiagnosticOptions& opts = {});

FredholmReport diagnose(const ProblemSpec& problem, const DiagnosticOptions& opts = {});

/// Basis y_i(t) = Y(t) q_i of ker(L, B); each carries n derivative layers.
std::vector<MatrixFunction> kernel_basis(const Analysis& analysis);
std::vector<MatrixFunction> kernel_basis(const ProblemSpec& problem, const DiagnosticOptions& opts = {});

}  // namespace fbvp
