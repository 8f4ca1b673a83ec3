#pragma once

#include "fbvp/boundary.hpp"

namespace fbvp {

/// The boundary-value problem  y' + A y = f,  B y = c  on grid.
struct ProblemSpec {
  Grid grid;
  Index m = 0;
  int n = 1;
  Index r = 0;
  MatrixFunction A;  // m x m, derivative layers 0..n-1
  MatrixFunction f;  // m x 1, derivative layers 0..n-1
  BoundaryOperator B;
  CVector c;

  /// Throws DimensionMismatch / MissingDerivativeLayers on inconsistency.
  void validate() const;
};

/// Builds a problem from its parts, reading m, n, r off A and B.
ProblemSpec make_problem(MatrixFunction A, MatrixFunction f, BoundaryOperator B, CVector c);

}  // namespace fbvp
