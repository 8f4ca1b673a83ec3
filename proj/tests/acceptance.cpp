// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fbvp/exprlang.hpp"
#include "fbvp/oracle.hpp"
#include "fbvp/solver.hpp"

using namespace fbvp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  Outcome& out;
  void operator()(bool ok, const std::string& what) {
    if (ok) return;
    if (out.pass) out.detail = what;
    out.pass = false;
  }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

CMatrix scalar(double v) { return CMatrix::Constant(1, 1, v); }

CMatrix mat2(double a, double b, double c, double d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

CVector vec(std::initializer_list<cplx> v) {
  CVector out(static_cast<Index>(v.size()));
  Index k = 0;
  for (cplx x : v) out(k++) = x;
  return out;
}

double max_error(const MatrixFunction& f, const std::function<CMatrix(double)>& exact, int layer = 0) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    worst = std::max(worst, (f.sample(layer, i) - exact(f.grid().point(i))).cwiseAbs().maxCoeff());
  return worst;
}

ProblemSpec homogeneous(const MatrixFunction& A, BoundaryOperator B) {
  const Index r = B.rows();
  return make_problem(A, MatrixFunction::zero(A.grid(), A.rows(), 1, B.order() - 1), std::move(B), CVector::Zero(r));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  CMatrix matrix(Index r, Index c) {
    CMatrix m(r, c);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) m(i, j) = cplx(uniform(), uniform());
    return m;
  }
  MatrixFunction polynomial(const Grid& g, Index r, Index c, int layers, double scale = 1.0) {
    std::vector<CMatrix> coeffs;
    for (int k = 0, deg = integer(0, 3); k <= deg; ++k) coeffs.push_back(scale * matrix(r, c));
    return polynomial_matrix_function(g, coeffs, layers);
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// 1. Index theorem against the collocation oracle.
Outcome index_theorem() {
  Outcome out;
  Check check{out};
  const auto start = std::chrono::steady_clock::now();
  const int trials = 200;
  const auto results = run_index_trials(1, trials, {});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  int agree = 0;
  for (const auto& r : results) {
    const bool ok = r.agree && r.report.index == r.m - r.r && r.oracle.index == r.m - r.r &&
                    r.report.dim_kernel == r.oracle.dim_kernel && r.report.dim_cokernel == r.oracle.dim_cokernel;
    agree += ok;
    check(ok, "seed " + std::to_string(r.seed) + " disagrees");
  }
  check(static_cast<int>(results.size()) == trials, "trial count");
  check(seconds < 120.0, "runtime " + num(seconds) + " s");
  if (out.pass) out.detail = std::to_string(agree) + "/" + std::to_string(trials) + " trials agree, " + num(seconds) + " s";
  return out;
}

// 2. Well-posedness exactly when the analytic determinant of [BY] is nonzero.
Outcome invertibility() {
  Outcome out;
  Check check{out};
  const Grid g(0.0, 1.0, 1001);
  struct Case {
    std::string name;
    ProblemSpec problem;
    double det;
  };
  std::vector<Case> corpus;
  Rng rng(2024);
  for (Index m = 1; m <= 3; ++m)
    corpus.push_back({"initial value m=" + std::to_string(m), homogeneous(rng.polynomial(g, m, m, 0, 0.7), presets::initial_value(g, m, 1)), 1.0});
  for (double lambda : {1.0, -0.5, 2.0})
    corpus.push_back({"endpoint", homogeneous(MatrixFunction::constant(g, scalar(lambda)), presets::endpoint(g, 1, 1)), std::exp(-lambda)});
  for (double lambda : {0.0, 1.0, -2.0})
    corpus.push_back({"periodic scalar", homogeneous(MatrixFunction::constant(g, scalar(lambda)), presets::periodic(g, 1, 1)),
                      std::exp(-lambda) - 1.0});
  const auto zero2 = MatrixFunction::zero(g, 2, 2);
  corpus.push_back({"two-point separated", homogeneous(zero2, presets::two_point(g, mat2(1, 0, 0, 0), mat2(0, 0, 0, 1), 1)), 1.0});
  corpus.push_back({"two-point degenerate", homogeneous(zero2, presets::two_point(g, CMatrix::Identity(2, 2), mat2(1, 0, 0, -1), 1)), 0.0});
  // Y(t) = [[cos t, sin t], [-sin t, cos t]]; conditions y_1(0), y_1(b) give det = sin b.
  for (double b : {std::numbers::pi / 2, std::numbers::pi, 2.0}) {
    const Grid rg(0.0, b, 1001);
    corpus.push_back({"rotation Dirichlet b=" + num(b),
                      homogeneous(MatrixFunction::constant(rg, mat2(0, -1, 1, 0)), presets::two_point(rg, mat2(1, 0, 0, 0), mat2(0, 0, 1, 0), 1)),
                      std::sin(b)});
  }
  corpus.push_back({"integral mean", homogeneous(MatrixFunction::constant(g, scalar(0.0)), presets::integral(MatrixFunction::constant(g, scalar(1.0)), 1)), 1.0});
  corpus.push_back({"integral exp", homogeneous(MatrixFunction::constant(g, scalar(1.0)), presets::integral(MatrixFunction::constant(g, scalar(1.0)), 1)),
                    1.0 - std::exp(-1.0)});
  corpus.push_back({"integral odd kernel",
                    homogeneous(MatrixFunction::constant(g, scalar(0.0)),
                                presets::integral(MatrixFunction::generate(g, 1, 1, [](double t) { return scalar(2 * t - 1); }), 1)),
                    0.0});

  int well_posed = 0;
  for (const auto& c : corpus) {
    const auto rep = diagnose(c.problem);
    const bool nonzero = std::abs(c.det) > 1e-12;
    well_posed += rep.well_posed;
    check(rep.well_posed == nonzero, c.name + ": well_posed=" + (rep.well_posed ? "true" : "false") + ", det " + num(c.det));
    if (rep.det_BY && nonzero) check(std::abs(*rep.det_BY - c.det) < 1e-8, c.name + ": det " + num(std::abs(*rep.det_BY)));
  }
  for (Index m = 1; m <= 4; ++m) {
    const auto rep = diagnose(homogeneous(MatrixFunction::zero(g, m, m), presets::periodic(g, m, 1)));
    check(!rep.well_posed && rep.dim_kernel == m, "periodic zero m=" + std::to_string(m));
  }
  if (out.pass)
    out.detail = std::to_string(corpus.size()) + " corpus problems (" + std::to_string(well_posed) + " well posed), periodic zero m=1..4";
  return out;
}

// 3. Matricant closed forms and the Liouville identity at N = 1001.
Outcome matricant_accuracy() {
  Outcome out;
  Check check{out};
  double worst = 0.0, worst_liouville = 0.0;
  auto record = [&](const std::string& name, const MatrixFunction& A, const std::function<CMatrix(double)>& exact) {
    const auto y = compute_matricant(A, 1);
    const double err = max_error(y.Y, exact);
    const double liou = liouville_residual(y, A);
    worst = std::max(worst, err);
    worst_liouville = std::max(worst_liouville, liou);
    check(err < 1e-8, name + " error " + num(err));
    check(liou < 1e-8, name + " Liouville " + num(liou));
  };
  const Grid g(0.0, 1.0, 1001);
  for (double lambda : {1.0, -1.0, 3.0, -2.5})
    record("scalar " + num(lambda), MatrixFunction::constant(g, scalar(lambda)), [lambda](double t) { return scalar(std::exp(-lambda * t)); });
  record("scalar cos t", MatrixFunction::generate(g, 1, 1, [](double t) { return scalar(std::cos(t)); }),
         [](double t) { return scalar(std::exp(-std::sin(t))); });
  CMatrix d = CMatrix::Zero(3, 3);
  d.diagonal() << 1.0, 2.0, -0.5;
  record("diagonal", MatrixFunction::constant(g, d), [&](double t) -> CMatrix {
    CMatrix e = CMatrix::Zero(3, 3);
    for (Index k = 0; k < 3; ++k) e(k, k) = std::exp(-d(k, k) * t);
    return e;
  });
  record("diagonal t", MatrixFunction::generate(g, 2, 2, [](double t) { return mat2(t, 0, 0, -2 * t); }),
         [](double t) { return mat2(std::exp(-t * t / 2), 0, 0, std::exp(t * t)); });
  for (double b : {std::numbers::pi / 2, std::numbers::pi}) {
    const Grid rg(0.0, b, 1001);
    record("rotation [0, " + num(b) + "]", MatrixFunction::constant(rg, mat2(0, -1, 1, 0)),
           [](double t) { return mat2(std::cos(t), std::sin(t), -std::sin(t), std::cos(t)); });
  }
  if (out.pass) out.detail = "max error " + num(worst) + ", max Liouville residual " + num(worst_liouville);
  return out;
}

// 4. recover_coefficient(compute_matricant(A)) returns A.
Outcome round_trip() {
  Outcome out;
  Check check{out};
  Rng rng(44);
  const Grid g(0.0, 1.0, 1001);
  double worst = 0.0;
  int count = 0;
  for (int n = 1; n <= 3; ++n) {
    std::vector<MatrixFunction> corpus;
    for (int k = 0; k < 4; ++k) {
      const Index m = rng.integer(1, 3);
      corpus.push_back(rng.polynomial(g, m, m, n - 1, 0.7));
    }
    corpus.push_back(expr::sample_matrix({{expr::parse("sin(t)"), expr::parse("1")}, {expr::parse("t^2"), expr::parse("-cos(2*t)")}}, g, n - 1));
    corpus.push_back(expr::sample_matrix({{expr::parse("exp(-t)/(1+t^2)")}}, g, n - 1));
    for (const auto& A : corpus) {
      const auto back = recover_coefficient(compute_matricant(A, n));
      for (LpExponent p : {LpExponent(1.0), LpExponent(2.0), LpExponent::infinity()}) {
        const double gap = sobolev_norm(back - A, n - 1, p);
        worst = std::max(worst, gap);
        ++count;
        check(gap < 1e-5, "n=" + std::to_string(n) + " p=" + num(p.value()) + " gap " + num(gap));
      }
    }
  }
  if (out.pass) out.detail = std::to_string(count) + " (A, n, p) cases, max gap " + num(worst);
  return out;
}

// 5. B(Y q) = [BY] q.
Outcome boundary_algebra() {
  Outcome out;
  Check check{out};
  Rng rng(55);
  const Grid g(0.0, 1.0, 401);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(1, 3);
    const Index m = rng.integer(1, 4), r = rng.integer(1, 5);
    std::vector<CMatrix> alphas;
    for (int k = 0; k < n; ++k) alphas.push_back(rng.matrix(r, m));
    BoundaryOperator B(alphas, rng.polynomial(g, r, m, 0));
    if (trial % 3 == 0) {
      const auto mp = presets::multipoint(g, {{0.0, rng.matrix(r, m)}, {rng.uniform(0.0, 1.0), rng.matrix(r, m)}, {1.0, rng.matrix(r, m)}}, n);
      B = BoundaryOperator(mp.alphas(), mp.phi() + B.phi());
    }
    const auto Y = compute_matricant(rng.polynomial(g, m, m, n - 1, 0.7), n).Y;
    const CMatrix q = rng.matrix(m, 1);
    // Y q assembled sample by sample in every layer.
    MatrixFunction yq(g, m, 1);
    for (int k = 0; k <= n; ++k) {
      std::vector<CMatrix> layer(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) layer[i] = Y.sample(k, i) * q;
      if (k == 0)
        yq = MatrixFunction(g, layer);
      else
        yq.append_layer(layer);
    }
    const CVector lhs = apply_boundary(B, yq);
    const CVector rhs = apply_boundary_matrix(B, Y).entries * q;
    const double gap = (lhs - rhs).cwiseAbs().maxCoeff();
    worst = std::max(worst, gap);
    check(gap < 1e-9, "trial " + std::to_string(trial) + " gap " + num(gap));
  }
  if (out.pass) out.detail = "100 triples, max |B(Yq) - [BY]q| " + num(worst);
  return out;
}

// 6. Solver residuals and closed forms.
Outcome solver_certification() {
  Outcome out;
  Check check{out};
  double worst_ode = 0.0, worst_bnd = 0.0, worst_exact = 0.0;
  auto certify = [&](const std::string& name, const ProblemSpec& p, const std::function<CMatrix(double)>& exact) {
    const auto sol = solve(p);
    worst_ode = std::max(worst_ode, sol.ode_residual);
    worst_bnd = std::max(worst_bnd, sol.boundary_residual);
    check(sol.ode_residual < 1e-6, name + " ode_residual " + num(sol.ode_residual));
    check(sol.boundary_residual < 1e-7, name + " boundary_residual " + num(sol.boundary_residual));
    if (exact) {
      const double err = max_error(sol.y, exact);
      worst_exact = std::max(worst_exact, err);
      check(err < 1e-8, name + " closed-form error " + num(err));
    }
  };
  const Grid g(0.0, 1.0, 1001);
  const auto c0 = [&](double v, int layers = 0) { return MatrixFunction::constant(g, scalar(v), layers); };
  certify("constant", make_problem(c0(0.0), c0(0.0), presets::initial_value(g, 1, 1), vec({5.0})), [](double) { return scalar(5.0); });
  for (double c : {2.0, -0.5})
    certify("endpoint c=" + num(c), make_problem(c0(1.0), c0(1.0), presets::endpoint(g, 1, 1), vec({c})),
            [c](double t) { return scalar(1 + (c - 1) * std::exp(1 - t)); });
  const Grid rg(0.0, std::numbers::pi, 1001);
  certify("rotation",
          make_problem(MatrixFunction::constant(rg, mat2(0, -1, 1, 0)), MatrixFunction::zero(rg, 2, 1), presets::initial_value(rg, 2, 1), vec({1.0, 0.0})),
          [](double t) {
            CMatrix v(2, 1);
            v << std::cos(t), -std::sin(t);
            return v;
          });
  // y' + y = 2 on [0,1], y(0) + y(1) = 4  =>  y = 2.
  certify("two-point forced", make_problem(c0(1.0), c0(2.0), presets::two_point(g, scalar(1.0), scalar(1.0), 1), vec({4.0})),
          [](double) { return scalar(2.0); });
  // y' + y = e^t, int y = J  =>  y = e^t/2 + kappa e^{-t}.
  const double kappa = 0.75;
  auto f = MatrixFunction::generate(g, 1, 1, [](double t) { return scalar(std::exp(t)); });
  f.append_layer(f.layer(0));
  certify("integral n=2", make_problem(c0(1.0, 1), f, presets::integral(c0(1.0), 2), vec({(std::exp(1.0) - 1) / 2 + kappa * (1 - std::exp(-1.0))})),
          [&](double t) { return scalar(std::exp(t) / 2 + kappa * std::exp(-t)); });
  // Periodic with A = 1, f = 1  =>  y = 1.
  certify("periodic forced", make_problem(c0(1.0), c0(1.0), presets::periodic(g, 1, 1), vec({0.0})), [](double) { return scalar(1.0); });

  Rng rng(66);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 2);
    const Index m = rng.integer(1, 4);
    BoundaryOperator B = presets::two_point(g, CMatrix::Identity(m, m), 0.5 * rng.matrix(m, m), n);
    certify("random " + std::to_string(trial),
            make_problem(rng.polynomial(g, m, m, n - 1, 0.7), rng.polynomial(g, m, 1, n - 1), std::move(B), rng.matrix(m, 1)), nullptr);
  }
  if (out.pass)
    out.detail = "max ode_residual " + num(worst_ode) + ", boundary_residual " + num(worst_bnd) + ", closed-form error " + num(worst_exact);
  return out;
}

// 7. Continuity of A -> Y and Y -> A along halving epsilons.
Outcome continuity() {
  Outcome out;
  Check check{out};
  std::vector<double> eps{0.2};
  for (int k = 0; k < 8; ++k) eps.push_back(eps.back() / 2);
  const Grid g(0.0, 1.0, 1001);
  Rng rng(77);
  struct Family {
    std::string name;
    MatrixFunction a0, d;
    int n;
    LpExponent p;
  };
  std::vector<Family> families;
  families.push_back({"scalar", MatrixFunction::constant(g, scalar(1.0)), MatrixFunction::constant(g, scalar(1.0)), 1, LpExponent(2.0)});
  families.push_back({"rotation", MatrixFunction::constant(g, mat2(0, -1, 1, 0)), MatrixFunction::constant(g, mat2(1, 0, 0, 0)), 1, LpExponent::infinity()});
  for (int n = 1; n <= 3; ++n)
    families.push_back({"random n=" + std::to_string(n), rng.polynomial(g, 2, 2, n - 1, 0.7), rng.polynomial(g, 2, 2, n - 1, 0.7), n, LpExponent(1.0)});
  double worst_ratio = 0.0;
  for (const auto& fam : families) {
    for (bool inverse : {false, true}) {
      const auto tr = inverse ? inverse_perturbation_study(fam.a0, fam.d, eps, fam.n, fam.p)
                              : perturbation_study(fam.a0, fam.d, eps, fam.n, fam.p);
      const std::string tag = fam.name + (inverse ? " inverse" : " forward");
      check(!tr.truncated && tr.output_gaps.size() == eps.size(), tag + " truncated");
      if (tr.output_gaps.size() != eps.size()) continue;
      for (std::size_t k = 1; k < eps.size(); ++k) check(tr.output_gaps[k] < tr.output_gaps[k - 1], tag + " not decreasing at step " + std::to_string(k));
      const double ratio = tr.output_gaps.back() / tr.output_gaps.front();
      worst_ratio = std::max(worst_ratio, ratio);
      check(ratio < 1e-2, tag + " final/initial " + num(ratio));
    }
  }
  if (out.pass) out.detail = std::to_string(2 * families.size()) + " traces, worst final/initial " + num(worst_ratio);
  return out;
}

// 8. Sobolev norms and Leibniz layers.
Outcome sobolev() {
  Outcome out;
  Check check{out};
  const Grid g(0.0, 1.0, 1001);
  auto gen = [](const Grid& grid, std::function<double(double)> f, std::function<double(double)> df, std::function<double(double)> d2f) {
    auto F = MatrixFunction::generate(grid, 1, 1, [&](double t) { return scalar(f(t)); });
    std::vector<CMatrix> l1(grid.size()), l2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      l1[i] = scalar(df(grid.point(i)));
      l2[i] = scalar(d2f(grid.point(i)));
    }
    F.append_layer(l1);
    F.append_layer(l2);
    return F;
  };
  double worst = 0.0;
  auto expect = [&](const std::string& name, double got, double want) {
    worst = std::max(worst, std::abs(got - want));
    check(std::abs(got - want) < 1e-6, name + " = " + num(got) + ", expected " + num(want));
  };
  const auto t = gen(g, [](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; });
  expect("||t||_{1,2}", sobolev_norm(t, 1, LpExponent(2.0)), 1 + 1 / std::sqrt(3.0));
  expect("||t||_{1,1}", sobolev_norm(t, 1, LpExponent(1.0)), 1.5);
  const auto e = gen(g, [](double x) { return std::exp(-x); }, [](double x) { return -std::exp(-x); }, [](double x) { return std::exp(-x); });
  expect("||e^-t||_{1,1}", sobolev_norm(e, 1, LpExponent(1.0)), 2 * (1 - std::exp(-1.0)));
  expect("||e^-t||_{2,inf}", sobolev_norm(e, 2, LpExponent::infinity()), 3.0);
  const auto sq = gen(g, [](double x) { return x * x; }, [](double x) { return 2 * x; }, [](double) { return 2.0; });
  expect("||t^2||_{2,2}", sobolev_norm(sq, 2, LpExponent(2.0)), 1 / std::sqrt(5.0) + 2 / std::sqrt(3.0) + 2);
  const Grid pg(0.0, std::numbers::pi, 1001);
  const auto s = gen(pg, [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); });
  expect("||sin||_{1,inf}", sobolev_norm(s, 1, LpExponent::infinity()), 2.0);
  expect("||sin||_{0,2}", sobolev_norm(s, 0, LpExponent(2.0)), std::sqrt(std::numbers::pi / 2));

  // Leibniz layers of F G against re-differentiation of the sampled product.
  Rng rng(88);
  const double h4 = std::pow(g.step(), 4);
  double worst_leibniz = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto F = expr::sample_matrix({{expr::parse("sin(" + num(rng.uniform(0.5, 2.0)) + "*t)"), expr::parse("exp(t)")}}, g, 2);
    const auto G = expr::sample_matrix({{expr::parse("cos(t)")}, {expr::parse("t^3 - " + num(rng.uniform()) + "*t")}}, g, 2);
    const auto prod = multiply(F, G);
    const auto redone = differentiate(prod.truncated(0), 2);
    for (int k = 1; k <= 2; ++k) {
      double gap = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) gap = std::max(gap, (prod.sample(k, i) - redone.sample(k, i)).cwiseAbs().maxCoeff());
      worst_leibniz = std::max(worst_leibniz, gap);
      check(gap < 2000 * h4 * (k == 1 ? 1.0 : 1.0 / g.step()), "Leibniz layer " + std::to_string(k) + " gap " + num(gap));
    }
  }
  if (out.pass) out.detail = "max norm error " + num(worst) + ", max Leibniz gap " + num(worst_leibniz);
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = "'" + std::string(FBVP_CLI_PATH) + "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 9. Parser fuzzing and CLI exit codes.
Outcome robustness() {
  Outcome out;
  Check check{out};
  Rng rng(99);
  static const std::vector<std::string> tokens = {"t", "pi", "e", "sin", "cos", "exp", "log", "sqrt", "abs", "tan", "(", ")", "+", "-",
                                                  "*", "/", "^", ",", " ", "1", "0", "2.5", "1e3", "1e", ".", "e+", "9", "x", "$"};
  int parsed = 0, rejected = 0;
  for (int k = 0; k < 100000; ++k) {
    std::string s;
    const int len = rng.integer(0, 24);
    for (int j = 0; j < len; ++j) {
      if (rng.integer(0, 9) == 0)
        s += static_cast<char>(rng.integer(1, 255));
      else
        s += tokens[static_cast<std::size_t>(rng.integer(0, static_cast<int>(tokens.size()) - 1))];
    }
    try {
      const auto ex = expr::parse(s);
      ++parsed;
      for (double t : {0.0, 0.5, -1.0}) {
        try {
          (void)ex.evaluate(t);
        } catch (const DomainFault&) {
        }
      }
      (void)expr::parse(ex.to_string());
    } catch (const ParseError& err) {
      ++rejected;
      check(err.offset() <= s.size(), "offset past end for input #" + std::to_string(k));
    } catch (const std::exception& ex) {
      check(false, "input #" + std::to_string(k) + " threw " + ex.what());
    }
  }
  check(parsed > 100 && rejected > 100, "fuzz corpus degenerate");

  const std::string dir = FBVP_PROBLEMS_DIR;
  const std::string one = " --direction '" + dir + "/direction_one.json'";
  struct Expect {
    std::string args;
    int code;
  };
  const std::vector<Expect> cases = {
      {"diagnose '" + dir + "/initial_value.json'", 0},
      {"diagnose '" + dir + "/periodic_zero.json'", 3},
      {"diagnose '" + dir + "/padded.json'", 3},
      {"solve '" + dir + "/periodic_zero.json'", 3},
      {"solve '" + dir + "/periodic_zero.json' --general", 0},
      {"", 2},
      {"unknown-command", 2},
      {"diagnose", 2},
      {"diagnose '" + dir + "/missing.json'", 2},
      {"diagnose '" + dir + "/constant.json' --grid-points 8", 2},
      {"diagnose '" + dir + "/constant.json' --rank-tol 0", 2},
      {"solve '" + dir + "/constant.json' --out /nonexistent/dir/y.csv", 2},
      {"perturb '" + dir + "/perturb_scalar.json'", 2},
      {"perturb '" + dir + "/perturb_scalar.json'" + one + " --eps 0.1,0.3", 2},
      {"perturb '" + dir + "/perturb_scalar.json'" + one + " --eps abc", 2},
      {"oracle --trials 5", 0},
      {"oracle --trials 20 --rank-tol 0.9", 4},
  };
  for (const auto& c : cases) {
    const int code = run_cli(c.args);
    check(code == c.code, "'fbvp " + c.args + "' exited " + std::to_string(code) + ", expected " + std::to_string(c.code));
  }
  if (out.pass)
    out.detail = "1e5 fuzz inputs (" + std::to_string(parsed) + " parsed, " + std::to_string(rejected) + " rejected), " +
                 std::to_string(cases.size()) + " CLI exit codes";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 index theorem", index_theorem},         {"AC2 invertibility criterion", invertibility},
      {"AC3 matricant accuracy", matricant_accuracy}, {"AC4 bijection round trip", round_trip},
      {"AC5 boundary algebra", boundary_algebra},    {"AC6 solver certification", solver_certification},
      {"AC7 continuity", continuity},                {"AC8 Sobolev norms", sobolev},
      {"AC9 robustness", robustness},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
