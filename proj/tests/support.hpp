#pragma once

#include <random>

#include "fbvp/oracle.hpp"
#include "fbvp/solver.hpp"

namespace testing {

using namespace fbvp;

inline double max_abs_diff(const MatrixFunction& f, const MatrixFunction& g, int layer = 0) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    worst = std::max(worst, (f.sample(layer, i) - g.sample(layer, i)).cwiseAbs().maxCoeff());
  return worst;
}

template <typename F>
double max_error(const MatrixFunction& f, F&& exact, int layer = 0) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const CMatrix e = exact(f.grid().point(i));
    worst = std::max(worst, (f.sample(layer, i) - e).cwiseAbs().maxCoeff());
  }
  return worst;
}

inline CMatrix scalar(cplx v) { return CMatrix::Constant(1, 1, v); }

inline CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  cplx complex() { return {uniform(), uniform()}; }
  CMatrix matrix(Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = complex();
    return m;
  }
  /// Random polynomial matrix function of degree <= 3 with exact layers.
  MatrixFunction polynomial(const Grid& g, Index rows, Index cols, int layers, double scale = 1.0) {
    std::vector<CMatrix> coeffs;
    for (int k = 0, deg = integer(0, 3); k <= deg; ++k) coeffs.push_back(scale * matrix(rows, cols));
    return polynomial_matrix_function(g, coeffs, layers);
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace testing
