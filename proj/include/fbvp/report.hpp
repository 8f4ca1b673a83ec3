#pragma once

// Text reports and CSV tables. Numbers are written with std::to_chars, so
// output is locale independent (decimal point, no grouping, '\n' line ends).

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fbvp/oracle.hpp"
#include "fbvp/solver.hpp"

namespace fbvp::io {

std::string format_number(double v);
std::string format_complex(cplx z);

/// Human-readable block followed by one key=value line per field.
void write_report(std::ostream& os, const FredholmReport& report);

/// Header "t,re_y1,im_y1,...", one row per grid point (layer 0).
void write_solution_csv(std::ostream& os, const MatrixFunction& y);

/// Header "t,re_<name>11,im_<name>11,..." in row-major entry order.
void write_matrix_function_csv(std::ostream& os, const MatrixFunction& f, std::string_view name);

/// Header "seed,m,r,n,boundary,dim_ker,dim_coker,index,oracle_points,agree".
void write_trials_csv(std::ostream& os, const std::vector<TrialResult>& trials);

/// Header "epsilon,input_gap,output_gap,sup_gap".
void write_trace_csv(std::ostream& os, const PerturbationTrace& trace);

}  // namespace fbvp::io
