#include "fbvp/oracle.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace fbvp {

namespace {

Eigen::MatrixXd derivative_matrix(const Grid& grid) {
  const auto n = static_cast<Index>(grid.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const DerivativeStencil st = derivative_stencil(grid, static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < 5; ++k) d(i, static_cast<Index>(st.first + k)) += st.weights[k];
  }
  return d;
}

}  // namespace

CollocationSystem assemble_collocation(const ProblemSpec& problem) {
  problem.validate();
  const Grid& grid = problem.grid;
  const Index m = problem.m, r = problem.r;
  const auto points = static_cast<Index>(grid.size());
  const double h = grid.step();
  const int n = problem.n;

  CollocationSystem sys{CMatrix::Zero(m * (points - 1) + r, m * points), {}, grid};
  const CMatrix eye = CMatrix::Identity(m, m);
  for (Index j = 0; j + 1 < points; ++j) {
    const auto js = static_cast<std::size_t>(j);
    sys.matrix.block(j * m, j * m, m, m) = -eye / h + 0.5 * problem.A(js);
    sys.matrix.block(j * m, (j + 1) * m, m, m) = eye / h + 0.5 * problem.A(js + 1);
    sys.row_blocks.push_back({RowBlock::Kind::Ode, j * m, m, js});
  }

  // Powers D^0..D^n of the stencil derivative matrix.
  std::vector<Eigen::MatrixXd> powers{Eigen::MatrixXd::Identity(points, points)};
  const Eigen::MatrixXd d = derivative_matrix(grid);
  for (int k = 1; k <= n; ++k) powers.push_back(d * powers.back());

  const Index row0 = m * (points - 1);
  auto rows = sys.matrix.middleRows(row0, r);
  const auto& alphas = problem.B.alphas();
  for (int k = 0; k < n; ++k) {
    const auto& pk = powers[static_cast<std::size_t>(k)];
    for (Index l = 0; l < points; ++l)
      if (pk(0, l) != 0.0) rows.middleCols(l * m, m) += pk(0, l) * alphas[static_cast<std::size_t>(k)];
  }
  const auto& pn = powers[static_cast<std::size_t>(n)];
  for (const auto& piece : problem.B.kernel())
    for (const auto& [i, w] : simpson_rule(grid, piece.first, piece.last)) {
      const CMatrix weighted = w * piece.weight(i);
      for (Index l = 0; l < points; ++l) {
        const double c = pn(static_cast<Index>(i), l);
        if (c != 0.0) rows.middleCols(l * m, m) += c * weighted;
      }
    }
  sys.row_blocks.push_back({RowBlock::Kind::Boundary, row0, r, 0});
  return sys;
}

NumericalIndex numerical_index(const CollocationSystem& sys, double tol) {
  // Rows are scaled to unit length first. ODE rows carry a 1/h factor that
  // would otherwise swamp the boundary rows in the relative threshold.
  CMatrix scaled = sys.matrix;
  for (Index i = 0; i < scaled.rows(); ++i) {
    const double norm = scaled.row(i).norm();
    if (norm > 0.0) scaled.row(i) /= norm;
  }
  const Eigen::VectorXd sigma = Eigen::BDCSVD<CMatrix>(scaled).singularValues();
  NumericalIndex out;
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma_max > 0.0 && sigma(i) > tol * sigma_max) ++out.rank;
  const Index rows = sys.matrix.rows(), cols = sys.matrix.cols();
  out.dim_kernel = cols - out.rank;
  out.dim_cokernel = rows - out.rank;
  out.index = static_cast<int>(cols - rows);
  const double inf = std::numeric_limits<double>::infinity();
  if (out.rank == 0 || out.rank >= sigma.size() || sigma(out.rank) == 0.0) {
    out.spectral_gap = inf;
  } else {
    out.spectral_gap = sigma(out.rank - 1) / sigma(out.rank);
  }
  return out;
}

MatrixFunction polynomial_matrix_function(const Grid& grid, const std::vector<CMatrix>& coeffs, int deriv_order) {
  if (coeffs.empty()) throw InvalidArgument("polynomial needs at least one coefficient");
  const Index rows = coeffs.front().rows(), cols = coeffs.front().cols();
  auto layer_at = [&](int k) {
    return MatrixFunction::generate(grid, rows, cols, [&](double t) -> CMatrix {
      CMatrix acc = CMatrix::Zero(rows, cols);
      const double x = t - grid.a();
      for (std::size_t j = static_cast<std::size_t>(k); j < coeffs.size(); ++j) {
        double falling = 1.0;
        for (int q = 0; q < k; ++q) falling *= static_cast<double>(j) - q;
        acc += (falling * std::pow(x, static_cast<double>(j) - k)) * coeffs[j];
      }
      return acc;
    });
  };
  MatrixFunction out = layer_at(0);
  for (int k = 1; k <= deriv_order; ++k) out.append_layer(layer_at(k).layer(0));
  return out;
}

// --------------------------------------------------------------------------
// Random trials

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  CMatrix matrix(Index rows, Index cols, bool complex_entries) {
    CMatrix out(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) out(i, j) = cplx(real(), complex_entries ? real() : 0.0);
    return out;
  }

  /// rows x cols with rank exactly `rank` (generically).
  CMatrix matrix_of_rank(Index rows, Index cols, Index rank, bool complex_entries) {
    if (rank == 0) return CMatrix::Zero(rows, cols);
    return matrix(rows, rank, complex_entries) * matrix(rank, cols, complex_entries);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

ProblemSpec TrialProblem::build(std::size_t grid_points) const {
  const Grid grid(0.0, 1.0, grid_points);
  MatrixFunction A = polynomial_matrix_function(grid, a_coeffs, n - 1);
  MatrixFunction f = MatrixFunction::zero(grid, m, 1, n - 1);
  return make_problem(std::move(A), std::move(f), make_boundary(grid), CVector::Zero(r));
}

TrialProblem random_trial_problem(std::uint64_t seed) {
  Sampler s(seed);
  TrialProblem tp;
  tp.seed = seed;
  tp.m = s.integer(1, 4);
  tp.r = s.integer(1, 6);
  tp.n = s.integer(1, 2);
  const Index m = tp.m, r = tp.r;
  const int n = tp.n;
  const bool complex_entries = s.chance(0.5);

  if (s.chance(0.2)) {
    tp.a_coeffs = {CMatrix::Zero(m, m)};
  } else {
    const int degree = s.integer(0, 3);
    for (int k = 0; k <= degree; ++k) tp.a_coeffs.push_back(0.7 * s.matrix(m, m, complex_entries));
  }

  static const char* kKinds[] = {"initial_value", "endpoint", "periodic", "two_point",
                                 "multipoint",    "integral", "explicit", "cauchy"};
  tp.boundary_kind = kKinds[s.integer(0, 7)];
  const std::string kind = tp.boundary_kind;

  if (kind == "cauchy") {
    if (r > m) {
      tp.boundary_kind = "cauchy_padded";
      tp.make_boundary = [=](const Grid& g) { return presets::cauchy_padded(g, r, m, n); };
    } else if (r < m) {
      tp.boundary_kind = "cauchy_truncated";
      tp.make_boundary = [=](const Grid& g) { return presets::cauchy_truncated(g, r, m, n); };
    } else {
      tp.boundary_kind = "initial_value";
      tp.make_boundary = [=](const Grid& g) { return presets::initial_value(g, m, n); };
    }
    return tp;
  }

  // Base operator with k0 rows, then composed with a left factor G (r x k0)
  // that may be rank deficient.
  Index k0 = m;
  std::function<BoundaryOperator(const Grid&)> base;
  if (kind == "initial_value") {
    base = [=](const Grid& g) { return presets::initial_value(g, m, n); };
  } else if (kind == "endpoint") {
    base = [=](const Grid& g) { return presets::endpoint(g, m, n); };
  } else if (kind == "periodic") {
    base = [=](const Grid& g) { return presets::periodic(g, m, n); };
  } else if (kind == "two_point") {
    k0 = s.integer(1, 6);
    const CMatrix ma = s.matrix(k0, m, complex_entries), mb = s.matrix(k0, m, complex_entries);
    base = [=](const Grid& g) { return presets::two_point(g, ma, mb, n); };
  } else if (kind == "multipoint") {
    k0 = s.integer(1, 6);
    std::vector<std::pair<double, CMatrix>> pts;
    const int count = s.integer(2, 3);
    for (int q = 0; q < count; ++q) pts.emplace_back(s.real(0.0, 1.0), s.matrix(k0, m, complex_entries));
    base = [=](const Grid& g) {
      std::vector<presets::PointCondition> conds;
      for (const auto& [t, w] : pts) conds.push_back({t, w});
      return presets::multipoint(g, conds, n);
    };
  } else if (kind == "integral") {
    k0 = s.integer(1, 6);
    std::vector<CMatrix> kc;
    for (int q = 0, deg = s.integer(0, 2); q <= deg; ++q) kc.push_back(s.matrix(k0, m, complex_entries));
    base = [=](const Grid& g) { return presets::integral(polynomial_matrix_function(g, kc, 0), n); };
  } else {
    k0 = s.integer(1, 6);
    std::vector<CMatrix> alphas;
    for (int k = 0; k < n; ++k) alphas.push_back(s.matrix(k0, m, complex_entries));
    std::vector<CMatrix> pc;
    for (int q = 0, deg = s.integer(0, 2); q <= deg; ++q) pc.push_back(s.matrix(k0, m, complex_entries));
    base = [=](const Grid& g) { return BoundaryOperator(alphas, polynomial_matrix_function(g, pc, 0)); };
  }

  CMatrix left;
  if (k0 == r && s.chance(0.4)) {
    left = CMatrix::Identity(r, r);
  } else if (s.chance(0.3)) {
    const Index full = std::min(r, k0);
    left = s.matrix_of_rank(r, k0, s.integer(0, static_cast<int>(full) - 1), complex_entries);
  } else {
    left = s.matrix(r, k0, complex_entries);
  }
  tp.make_boundary = [=](const Grid& g) { return left * base(g); };
  return tp;
}

TrialResult run_index_trial(std::uint64_t seed, const TrialOptions& opts) {
  const TrialProblem tp = random_trial_problem(seed);
  TrialResult res;
  res.seed = seed;
  res.m = tp.m;
  res.r = tp.r;
  res.n = tp.n;
  res.boundary_kind = tp.boundary_kind;
  res.report = diagnose(tp.build(opts.diagnose_points), opts.diagnostics);

  std::size_t points = opts.oracle_points;
  for (int attempt = 0;; ++attempt) {
    res.oracle = numerical_index(assemble_collocation(tp.build(points)), opts.oracle_rank_tol);
    res.oracle_points = points;
    if (res.oracle.spectral_gap >= opts.min_gap || attempt >= opts.max_refinements) break;
    points = 2 * (points - 1) + 1;
  }
  const int expected_index = static_cast<int>(tp.m - tp.r);
  res.agree = res.oracle.dim_kernel == res.report.dim_kernel && res.oracle.dim_cokernel == res.report.dim_cokernel &&
              res.oracle.index == expected_index && res.report.index == expected_index &&
              res.report.dim_kernel - res.report.dim_cokernel == expected_index;
  return res;
}

std::vector<TrialResult> run_index_trials(std::uint64_t seed, int trials, const TrialOptions& opts) {
  std::vector<TrialResult> results(static_cast<std::size_t>(std::max(trials, 0)));
  unsigned threads = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(results.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < results.size();) results[k] = run_index_trial(trial_seed(seed, k), opts);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return results;
}

// --------------------------------------------------------------------------
// Perturbation traces

namespace {

void check_epsilons(const std::vector<double>& eps) {
  if (eps.empty()) throw InvalidArgument("perturbation study needs at least one epsilon");
  for (std::size_t k = 1; k < eps.size(); ++k)
    if (!(eps[k] < eps[k - 1])) throw InvalidArgument("epsilons must be strictly decreasing");
}

void finish_ratio(PerturbationTrace& tr) {
  for (std::size_t k = 0; k < tr.input_gaps.size(); ++k) {
    const double in = tr.input_gaps[k], out = tr.output_gaps[k];
    if (in > 0.0 && out > 0.0) tr.ratio_bound = std::max({tr.ratio_bound, out / in, in / out});
  }
}

template <typename Step>
PerturbationTrace trace(const std::vector<double>& epsilons, Step&& step) {
  check_epsilons(epsilons);
  PerturbationTrace tr;
  for (double eps : epsilons) {
    try {
      const auto [in, out, sup] = step(eps);
      tr.epsilons.push_back(eps);
      tr.input_gaps.push_back(in);
      tr.output_gaps.push_back(out);
      tr.sup_gaps.push_back(sup);
    } catch (const BlowUp& e) {
      tr.truncated = true;
      tr.note = "eps = " + std::to_string(eps) + ": " + e.what();
      break;
    }
  }
  finish_ratio(tr);
  return tr;
}

}  // namespace

PerturbationTrace perturbation_study(const MatrixFunction& A0, const MatrixFunction& D, const std::vector<double>& epsilons,
                                     int n, LpExponent p) {
  const MatrixFunction y0 = compute_matricant(A0, n).Y;
  return trace(epsilons, [&](double eps) {
    const MatrixFunction a_eps = A0 + eps * D;
    const MatrixFunction gap = compute_matricant(a_eps, n).Y - y0;
    return std::tuple{sobolev_norm(a_eps - A0, n - 1, p), sobolev_norm(gap, n, p), max_abs(gap)};
  });
}

PerturbationTrace inverse_perturbation_study(const MatrixFunction& A0, const MatrixFunction& D,
                                             const std::vector<double>& epsilons, int n, LpExponent p) {
  const MatrixFunction y0 = compute_matricant(A0, n).Y;
  const MatrixFunction a0 = recover_coefficient(y0);
  return trace(epsilons, [&](double eps) {
    const MatrixFunction y_eps = compute_matricant(A0 + eps * D, n).Y;
    const MatrixFunction gap = recover_coefficient(y_eps) - a0;
    return std::tuple{sobolev_norm(y_eps - y0, n, p), sobolev_norm(gap, n - 1, p), max_abs(gap)};
  });
}

}  // namespace fbvp
