#pragma once

// JSON problem documents.
//
//   {
//     "interval":   {"a": 0, "b": 1, "grid_points": 1001},
//     "dimensions": {"m": 2, "n": 1, "r": 2, "p": 2},          // p may be "inf"
//     "A": [["0", "-1"], ["1", "0"]],                          // or {"csv": "file.csv"}
//     "f": ["0", "sin(t)"],                                    // optional, default 0
//     "boundary": {"preset": "two_point", "M_a": [[1, 0], [0, 0]], "M_b": [[0, 0], [1, 0]]},
//     "c": [1, [0, 2]]                                          // reals or [re, im]
//   }
//
// Boundary presets: initial_value, endpoint, periodic, two_point (M_a, M_b),
// multipoint (points: [{t, M}]), integral (kernel: expression matrix),
// cauchy_padded, cauchy_truncated. Explicit operators give "alphas" (n
// numeric r x m matrices) and optionally "phi" (expression matrix).

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "fbvp/problem.hpp"

namespace fbvp::io {

/// Schema violation; `path` is the offending field, e.g. "boundary.points[1].t".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct LoadOptions {
  std::optional<std::size_t> grid_points;
};

class ProblemFile {
 public:
  /// Reads and validates; throws SchemaError (or ParseError wrapped as SchemaError).
  static ProblemFile load(const std::filesystem::path& path);
  static ProblemFile parse(std::string_view text, std::filesystem::path base_dir = ".");

  /// Samples every expression and assembles the problem.
  ProblemSpec build(const LoadOptions& opts = {}) const;

  Grid grid(const LoadOptions& opts = {}) const;

  /// Normalized document: expressions re-emitted from their parse trees.
  std::string dump() const;

  const nlohmann::json& document() const noexcept { return doc_; }

 private:
  ProblemFile(nlohmann::json doc, std::filesystem::path base_dir);
  void validate() const;

  nlohmann::json doc_;
  std::filesystem::path base_dir_;
};

/// Reads {"A": ...} from a direction file and samples it with `deriv_order` layers.
MatrixFunction load_coefficient(const std::filesystem::path& path, const Grid& grid, Index m, int deriv_order);

}  // namespace fbvp::io
