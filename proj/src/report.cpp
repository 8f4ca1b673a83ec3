#include "fbvp/report.hpp"

#include <charconv>
#include <cmath>

namespace fbvp::io {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_complex(cplx z) {
  std::string out = format_number(z.real());
  const double im = z.imag();
  out += (std::signbit(im) ? "-" : "+") + format_number(std::abs(im)) + "i";
  return out;
}

void write_report(std::ostream& os, const FredholmReport& rep) {
  const auto yes = [](bool b) { return b ? "true" : "false"; };
  std::string sigmas;
  for (Index i = 0; i < rep.singular_values.size(); ++i) sigmas += (i ? " " : "") + format_number(rep.singular_values(i));

  os << "Fredholm report\n"
     << "  well_posed: " << yes(rep.well_posed) << ", index: " << rep.index << ", dim_kernel: " << rep.dim_kernel
     << ", dim_cokernel: " << rep.dim_cokernel << "\n"
     << "  m: " << rep.m << ", r: " << rep.r << ", n: " << rep.n << ", p: " << format_number(rep.p) << "\n"
     << "  rank of [BY]: " << rep.rank << " (rank_tol " << format_number(rep.rank_tolerance) << ")"
     << (rep.marginal_rank ? "  WARNING: marginal rank, a singular value is within 10x of the threshold" : "") << "\n";
  if (rep.det_BY) os << "  det[BY]: " << format_complex(*rep.det_BY) << "\n";
  os << "  condition_number: " << format_number(rep.condition_number) << "\n"
     << "  singular_values: " << sigmas << "\n";

  os << "m=" << rep.m << "\n"
     << "r=" << rep.r << "\n"
     << "n=" << rep.n << "\n"
     << "p=" << format_number(rep.p) << "\n"
     << "index=" << rep.index << "\n"
     << "rank=" << rep.rank << "\n"
     << "dim_kernel=" << rep.dim_kernel << "\n"
     << "dim_cokernel=" << rep.dim_cokernel << "\n"
     << "well_posed=" << yes(rep.well_posed) << "\n";
  if (rep.det_BY) os << "det_BY=" << format_complex(*rep.det_BY) << "\n";
  os << "condition_number=" << format_number(rep.condition_number) << "\n"
     << "rank_tolerance=" << format_number(rep.rank_tolerance) << "\n"
     << "marginal_rank=" << yes(rep.marginal_rank) << "\n";
}

void write_matrix_function_csv(std::ostream& os, const MatrixFunction& f, std::string_view name) {
  const bool vector = f.cols() == 1;
  os << "t";
  for (Index r = 0; r < f.rows(); ++r)
    for (Index c = 0; c < f.cols(); ++c) {
      const std::string idx = vector ? std::to_string(r + 1) : std::to_string(r + 1) + std::to_string(c + 1);
      os << ",re_" << name << idx << ",im_" << name << idx;
    }
  os << "\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << format_number(f.grid().point(i));
    for (Index r = 0; r < f.rows(); ++r)
      for (Index c = 0; c < f.cols(); ++c) os << "," << format_number(f(i)(r, c).real()) << "," << format_number(f(i)(r, c).imag());
    os << "\n";
  }
}

void write_solution_csv(std::ostream& os, const MatrixFunction& y) { write_matrix_function_csv(os, y, "y"); }

void write_trials_csv(std::ostream& os, const std::vector<TrialResult>& trials) {
  os << "seed,m,r,n,boundary,dim_ker,dim_coker,index,oracle_points,agree\n";
  for (const auto& t : trials)
    os << t.seed << "," << t.m << "," << t.r << "," << t.n << "," << t.boundary_kind << "," << t.oracle.dim_kernel << ","
       << t.oracle.dim_cokernel << "," << t.oracle.index << "," << t.oracle_points << "," << (t.agree ? "agree" : "DISAGREE")
       << "\n";
}

void write_trace_csv(std::ostream& os, const PerturbationTrace& trace) {
  os << "epsilon,input_gap,output_gap,sup_gap\n";
  for (std::size_t k = 0; k < trace.epsilons.size(); ++k)
    os << format_number(trace.epsilons[k]) << "," << format_number(trace.input_gaps[k]) << ","
       << format_number(trace.output_gaps[k]) << "," << format_number(trace.sup_gaps[k]) << "\n";
}

}  // namespace fbvp::io
