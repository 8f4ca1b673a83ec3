#include "fbvp/problem.hpp"

namespace fbvp {

void ProblemSpec::validate() const {
  if (n < 1) throw InvalidArgument("Sobolev order n must be at least 1");
  if (A.rows() != m || A.cols() != m) throw DimensionMismatch("A must be m x m");
  if (f.rows() != m || f.cols() != 1) throw DimensionMismatch("f must be m x 1");
  if (!(A.grid() == grid) || !(f.grid() == grid) || !(B.grid() == grid))
    throw DimensionMismatch("A, f and B must share the problem grid");
  if (B.cols() != m || B.rows() != r || B.order() != n) throw DimensionMismatch("boundary operator must be r x m of order n");
  if (c.size() != r) throw DimensionMismatch("right-hand side c must have r entries");
  A.require_order(n - 1);
  f.require_order(n - 1);
}

ProblemSpec make_problem(MatrixFunction A, MatrixFunction f, BoundaryOperator B, CVector c) {
  ProblemSpec p{A.grid(), A.rows(), B.order(), B.rows(), std::move(A), std::move(f), std::move(B), std::move(c)};
  p.validate();
  return p;
}

}  // namespace fbvp
