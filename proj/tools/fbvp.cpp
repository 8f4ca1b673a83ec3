// fbvp: command-line front end.
//
// Exit codes: 0 success, 2 input error, 3 not well posed, 4 oracle disagreement.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fbvp/exprlang.hpp"
#include "fbvp/oracle.hpp"
#include "fbvp/problem_file.hpp"
#include "fbvp/report.hpp"
#include "fbvp/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNotWellPosed = 3;
constexpr int kExitDisagree = 4;

struct CommonFlags {
  std::string file;
  std::optional<std::size_t> grid_points;
  double rank_tol = fbvp::kDefaultRankTolerance;
  double det_floor = fbvp::kDefaultDetFloor;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_file = true) {
  if (needs_file) cmd->add_option("file", flags.file, "problem file (JSON)")->required();
  cmd->add_option("--grid-points", flags.grid_points, "override the grid point count (odd, >= 5)");
  cmd->add_option("--rank-tol", flags.rank_tol, "relative rank tolerance for [BY]")->check(CLI::PositiveNumber);
  cmd->add_option("--det-floor", flags.det_floor, "smallest |det| treated as nonsingular")->check(CLI::PositiveNumber);
  cmd->add_option("--out", flags.out, "write CSV output to this path instead of standard output");
}

fbvp::DiagnosticOptions diagnostics(const CommonFlags& flags) { return {flags.rank_tol, flags.det_floor}; }

/// Runs `body` with CSV output bound to --out or standard output.
template <typename Body>
void with_output(const CommonFlags& flags, Body&& body) {
  if (flags.out.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream os(flags.out, std::ios::binary);
  if (!os) throw fbvp::InvalidArgument("cannot write " + flags.out);
  body(os);
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> eps;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !(v > 0.0))
      throw fbvp::InvalidArgument("--eps: '" + cell + "' is not a positive number");
    eps.push_back(v);
  }
  return eps;
}

int cmd_diagnose(const CommonFlags& flags) {
  const auto problem = fbvp::io::ProblemFile::load(flags.file).build({flags.grid_points});
  const auto report = fbvp::diagnose(problem, diagnostics(flags));
  fbvp::io::write_report(std::cout, report);
  return report.well_posed ? kExitOk : kExitNotWellPosed;
}

void print_residuals(std::ostream& os, const fbvp::BvpSolution& sol) {
  os << "ode_residual=" << fbvp::io::format_number(sol.ode_residual) << "\n"
     << "boundary_residual=" << fbvp::io::format_number(sol.boundary_residual) << "\n";
}

int cmd_solve(const CommonFlags& flags, bool general) {
  const auto problem = fbvp::io::ProblemFile::load(flags.file).build({flags.grid_points});
  fbvp::SolveOptions opts;
  opts.diagnostics = diagnostics(flags);
  std::ostream& report_out = flags.out.empty() ? std::cerr : std::cout;
  if (general) {
    const auto gs = fbvp::general_solution(problem, opts);
    if (!gs.solvable) {
      std::cerr << "unsolvable: c - B y_part is not in the range of [BY] (residual "
                << fbvp::io::format_number(gs.residual) << ")\n";
      return kExitNotWellPosed;
    }
    with_output(flags, [&](std::ostream& os) { fbvp::io::write_solution_csv(os, gs.particular->y); });
    print_residuals(report_out, *gs.particular);
    report_out << "kernel_dimension=" << gs.kernel.size() << "\n";
    return kExitOk;
  }
  try {
    const auto sol = fbvp::solve(problem, opts);
    with_output(flags, [&](std::ostream& os) { fbvp::io::write_solution_csv(os, sol.y); });
    print_residuals(report_out, sol);
  } catch (const fbvp::NotWellPosed& e) {
    std::cerr << e.what() << "\n";
    fbvp::io::write_report(std::cerr, e.report());
    return kExitNotWellPosed;
  }
  return kExitOk;
}

int cmd_matricant(const CommonFlags& flags) {
  const auto problem = fbvp::io::ProblemFile::load(flags.file).build({flags.grid_points});
  const auto y = fbvp::compute_matricant(problem.A, problem.n);
  with_output(flags, [&](std::ostream& os) { fbvp::io::write_matrix_function_csv(os, y.Y, "Y"); });
  std::ostream& report_out = flags.out.empty() ? std::cerr : std::cout;
  report_out << "liouville_residual=" << fbvp::io::format_number(fbvp::liouville_residual(y, problem.A)) << "\n";
  return kExitOk;
}

int cmd_perturb(const CommonFlags& flags, const std::string& direction, const std::string& eps, bool inverse) {
  const auto pf = fbvp::io::ProblemFile::load(flags.file);
  const auto problem = pf.build({flags.grid_points});
  const auto d = fbvp::io::load_coefficient(direction, problem.grid, problem.m, problem.n - 1);
  const auto epsilons = parse_eps_list(eps);
  const auto p = problem.grid.exponent();
  const auto trace = inverse ? fbvp::inverse_perturbation_study(problem.A, d, epsilons, problem.n, p)
                             : fbvp::perturbation_study(problem.A, d, epsilons, problem.n, p);
  with_output(flags, [&](std::ostream& os) { fbvp::io::write_trace_csv(os, trace); });
  if (trace.truncated) std::cerr << "trace truncated: " << trace.note << "\n";
  std::cerr << "ratio_bound=" << fbvp::io::format_number(trace.ratio_bound) << "\n";
  return kExitOk;
}

int cmd_oracle(const CommonFlags& flags, std::uint64_t seed, int trials) {
  fbvp::TrialOptions opts;
  opts.diagnostics = diagnostics(flags);
  if (flags.grid_points) opts.oracle_points = *flags.grid_points;
  const auto results = fbvp::run_index_trials(seed, trials, opts);
  with_output(flags, [&](std::ostream& os) { fbvp::io::write_trials_csv(os, results); });
  std::vector<std::uint64_t> failing;
  for (const auto& r : results)
    if (!r.agree) failing.push_back(r.seed);
  if (failing.empty()) return kExitOk;
  std::cerr << failing.size() << " trial(s) disagree; failing seeds:";
  for (auto s : failing) std::cerr << " " << s;
  std::cerr << "\n";
  return kExitDisagree;
}

int cmd_dump(const CommonFlags& flags) {
  std::cout << fbvp::io::ProblemFile::load(flags.file).dump();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear boundary-value problems for first-order ODE systems with Fredholm diagnostics"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* diagnose = app.add_subcommand("diagnose", "print the Fredholm report of a problem");
  add_common(diagnose, flags);

  bool general = false;
  auto* solve = app.add_subcommand("solve", "solve a well-posed problem and write the solution as CSV");
  add_common(solve, flags);
  solve->add_flag("--general", general, "for rank-deficient problems, emit the minimum-norm solution if one exists");

  auto* matricant = app.add_subcommand("matricant", "write the matricant Y as CSV");
  add_common(matricant, flags);

  std::string direction, eps = "0.1,0.05,0.025,0.0125";
  bool inverse = false;
  auto* perturb = app.add_subcommand("perturb", "continuity trace of A -> Y along A + eps D");
  add_common(perturb, flags);
  perturb->add_option("--direction", direction, "file with the perturbation direction {\"A\": ...}")->required();
  perturb->add_option("--eps", eps, "comma-separated, strictly decreasing epsilons");
  perturb->add_flag("--inverse", inverse, "trace the inverse map Y -> A instead");

  std::uint64_t seed = 1;
  int trials = 200;
  auto* oracle = app.add_subcommand("oracle", "randomized index-theorem trials against the collocation oracle");
  add_common(oracle, flags, false);
  oracle->add_option("--seed", seed, "64-bit seed of the trial corpus");
  oracle->add_option("--trials", trials, "number of trials")->check(CLI::NonNegativeNumber);

  auto* dump = app.add_subcommand("dump", "re-emit a problem file in normalized form");
  add_common(dump, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*diagnose) return cmd_diagnose(flags);
    if (*solve) return cmd_solve(flags, general);
    if (*matricant) return cmd_matricant(flags);
    if (*perturb) return cmd_perturb(flags, direction, eps, inverse);
    if (*oracle) return cmd_oracle(flags, seed, trials);
    if (*dump) return cmd_dump(flags);
  } catch (const fbvp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitInput;
}
