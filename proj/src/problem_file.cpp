#include "fbvp/problem_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fbvp/exprlang.hpp"

namespace fbvp::io {

using nlohmann::json;

namespace {

using ExprMatrix = std::vector<std::vector<expr::Expr>>;

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path.empty() ? "(root)" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(at(path, key), "missing required field");
  return *it;
}

void allow_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw SchemaError(at(path, k), "unknown field");
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "number must be finite");
  return v;
}

long integer(const json& j, const std::string& path, long min) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  const long v = j.get<long>();
  if (v < min) throw SchemaError(path, "must be at least " + std::to_string(min));
  return v;
}

cplx complex_number(const json& j, const std::string& path) {
  if (j.is_number()) return number(j, path);
  if (j.is_array() && j.size() == 2) return {number(j[0], at(path, 0)), number(j[1], at(path, 1))};
  throw SchemaError(path, "expected a number or [re, im] pair");
}

const json& array_of(const json& j, std::size_t size, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  if (j.size() != size)
    throw SchemaError(path, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
  return j;
}

CMatrix numeric_matrix(const json& j, Index rows, Index cols, const std::string& path) {
  array_of(j, static_cast<std::size_t>(rows), path);
  CMatrix out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const std::string rp = at(path, static_cast<std::size_t>(r));
    const json& row = array_of(j[static_cast<std::size_t>(r)], static_cast<std::size_t>(cols), rp);
    for (Index c = 0; c < cols; ++c)
      out(r, c) = complex_number(row[static_cast<std::size_t>(c)], at(rp, static_cast<std::size_t>(c)));
  }
  return out;
}

Index matrix_rows(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a non-empty matrix (array of rows)");
  return static_cast<Index>(j.size());
}

std::string literal(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

expr::Expr expression(const json& j, const std::string& path) {
  std::string src;
  if (j.is_string()) {
    src = j.get<std::string>();
  } else if (j.is_number()) {
    src = literal(number(j, path));
  } else if (j.is_array() && j.size() == 2) {
    const cplx z = complex_number(j, path);
    src = "(" + literal(z.real()) + ")+(" + literal(z.imag()) + ")*i";
  } else {
    throw SchemaError(path, "expected an expression string or number");
  }
  try {
    return expr::parse(src);
  } catch (const ParseError& e) {
    throw SchemaError(path, e.what());
  }
}

ExprMatrix expression_matrix(const json& j, Index rows, Index cols, const std::string& path) {
  array_of(j, static_cast<std::size_t>(rows), path);
  ExprMatrix out;
  for (Index r = 0; r < rows; ++r) {
    const std::string rp = at(path, static_cast<std::size_t>(r));
    const json& row = array_of(j[static_cast<std::size_t>(r)], static_cast<std::size_t>(cols), rp);
    out.emplace_back();
    for (Index c = 0; c < cols; ++c) out.back().push_back(expression(row[static_cast<std::size_t>(c)], at(rp, static_cast<std::size_t>(c))));
  }
  return out;
}

ExprMatrix expression_vector(const json& j, Index size, const std::string& path) {
  array_of(j, static_cast<std::size_t>(size), path);
  ExprMatrix out;
  for (Index r = 0; r < size; ++r) out.push_back({expression(j[static_cast<std::size_t>(r)], at(path, static_cast<std::size_t>(r)))});
  return out;
}

struct BoundarySpec {
  std::string preset;  // empty for explicit operators
  CMatrix m_a, m_b;
  std::vector<std::pair<double, CMatrix>> points;
  ExprMatrix kernel;
  std::vector<CMatrix> alphas;
  std::optional<ExprMatrix> phi;
};

struct Interpreted {
  double a = 0, b = 1;
  std::size_t points = Grid::kDefaultPoints;
  LpExponent p;
  Index m = 1, r = 1;
  int n = 1;
  std::optional<ExprMatrix> a_exprs;
  std::filesystem::path a_csv;
  std::optional<ExprMatrix> f_exprs;
  BoundarySpec boundary;
  CVector c;
};

LpExponent exponent(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return LpExponent::infinity();
    throw SchemaError(path, "expected a number >= 1 or \"inf\"");
  }
  const double v = number(j, path);
  if (v < 1.0) throw SchemaError(path, "Lebesgue exponent must be >= 1");
  return LpExponent(v);
}

BoundarySpec interpret_boundary(const json& j, Index m, Index r, int n) {
  const std::string path = "boundary";
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  if (j.contains("measure"))
    throw SchemaError(at(path, "measure"),
                      "boundary operators given by finitely additive measures are not supported; use alphas and phi");
  BoundarySpec spec;
  Index rows = 0;
  if (j.contains("preset")) {
    const json& pj = j["preset"];
    if (!pj.is_string()) throw SchemaError(at(path, "preset"), "expected a preset name");
    spec.preset = pj.get<std::string>();
    const std::string& k = spec.preset;
    if (k == "initial_value" || k == "endpoint" || k == "periodic") {
      allow_keys(j, {"preset"}, path);
      rows = m;
    } else if (k == "two_point") {
      allow_keys(j, {"preset", "M_a", "M_b"}, path);
      rows = matrix_rows(require(j, "M_a", path), at(path, "M_a"));
      spec.m_a = numeric_matrix(j["M_a"], rows, m, at(path, "M_a"));
      spec.m_b = numeric_matrix(require(j, "M_b", path), rows, m, at(path, "M_b"));
    } else if (k == "multipoint") {
      allow_keys(j, {"preset", "points"}, path);
      const json& pts = require(j, "points", path);
      if (!pts.is_array() || pts.empty()) throw SchemaError(at(path, "points"), "expected a non-empty array");
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string pp = at(at(path, "points"), i);
        allow_keys(pts[i], {"t", "M"}, pp);
        const double t = number(require(pts[i], "t", pp), at(pp, "t"));
        if (i == 0) rows = matrix_rows(require(pts[i], "M", pp), at(pp, "M"));
        spec.points.emplace_back(t, numeric_matrix(require(pts[i], "M", pp), rows, m, at(pp, "M")));
      }
    } else if (k == "integral") {
      allow_keys(j, {"preset", "kernel"}, path);
      rows = matrix_rows(require(j, "kernel", path), at(path, "kernel"));
      spec.kernel = expression_matrix(j["kernel"], rows, m, at(path, "kernel"));
    } else if (k == "cauchy_padded") {
      allow_keys(j, {"preset"}, path);
      if (r <= m) throw SchemaError(at(path, "preset"), "cauchy_padded needs r > m");
      rows = r;
    } else if (k == "cauchy_truncated") {
      allow_keys(j, {"preset"}, path);
      if (r >= m) throw SchemaError(at(path, "preset"), "cauchy_truncated needs r < m");
      rows = r;
    } else {
      throw SchemaError(at(path, "preset"), "unknown preset '" + k + "'");
    }
  } else {
    allow_keys(j, {"alphas", "phi"}, path);
    const json& aj = array_of(require(j, "alphas", path), static_cast<std::size_t>(n), at(path, "alphas"));
    rows = matrix_rows(aj[0], at(at(path, "alphas"), 0));
    for (std::size_t k = 0; k < aj.size(); ++k) spec.alphas.push_back(numeric_matrix(aj[k], rows, m, at(at(path, "alphas"), k)));
    if (j.contains("phi")) spec.phi = expression_matrix(j["phi"], rows, m, at(path, "phi"));
  }
  if (rows != r)
    throw SchemaError(path, "operator has " + std::to_string(rows) + " rows but dimensions.r = " + std::to_string(r));
  return spec;
}

Interpreted interpret(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw SchemaError("(root)", "expected an object");
  allow_keys(doc, {"interval", "dimensions", "A", "f", "boundary", "c"}, "");
  Interpreted in;

  const json& iv = require(doc, "interval", "");
  allow_keys(iv, {"a", "b", "grid_points"}, "interval");
  in.a = number(require(iv, "a", "interval"), "interval.a");
  in.b = number(require(iv, "b", "interval"), "interval.b");
  if (!(in.a < in.b)) throw SchemaError("interval", "need a < b");
  if (iv.contains("grid_points")) {
    in.points = static_cast<std::size_t>(integer(iv["grid_points"], "interval.grid_points", 5));
    if (in.points % 2 == 0) throw SchemaError("interval.grid_points", "must be odd");
  }

  const json& dims = require(doc, "dimensions", "");
  allow_keys(dims, {"m", "n", "r", "p"}, "dimensions");
  in.m = integer(require(dims, "m", "dimensions"), "dimensions.m", 1);
  in.n = static_cast<int>(integer(require(dims, "n", "dimensions"), "dimensions.n", 1));
  in.r = integer(require(dims, "r", "dimensions"), "dimensions.r", 1);
  if (dims.contains("p")) in.p = exponent(dims["p"], "dimensions.p");

  const json& aj = require(doc, "A", "");
  if (aj.is_object()) {
    allow_keys(aj, {"csv"}, "A");
    const json& cj = require(aj, "csv", "A");
    if (!cj.is_string()) throw SchemaError("A.csv", "expected a file path");
    in.a_csv = base_dir / cj.get<std::string>();
    if (!std::filesystem::exists(in.a_csv)) throw SchemaError("A.csv", "file not found: " + in.a_csv.string());
  } else {
    in.a_exprs = expression_matrix(aj, in.m, in.m, "A");
  }
  if (doc.contains("f")) in.f_exprs = expression_vector(doc["f"], in.m, "f");

  in.boundary = interpret_boundary(require(doc, "boundary", ""), in.m, in.r, in.n);

  const json& cj = array_of(require(doc, "c", ""), static_cast<std::size_t>(in.r), "c");
  in.c.resize(in.r);
  for (Index k = 0; k < in.r; ++k) in.c(k) = complex_number(cj[static_cast<std::size_t>(k)], at("c", static_cast<std::size_t>(k)));
  return in;
}

MatrixFunction read_csv_samples(const std::filesystem::path& path, const Grid& grid, Index m) {
  std::ifstream in(path);
  if (!in) throw SchemaError("A.csv", "cannot open " + path.string());
  std::vector<CMatrix> samples;
  std::string line;
  std::size_t line_no = 0;
  const double tol = 1e-9 * (grid.b() - grid.a());
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const char* first = cell.data();
      while (first != cell.data() + cell.size() && *first == ' ') ++first;
      const auto res = std::from_chars(first, cell.data() + cell.size(), v);
      if (res.ec != std::errc()) {
        numeric = false;
        break;
      }
      values.push_back(v);
    }
    if (!numeric) {
      if (samples.empty() && line_no == 1) continue;  // header
      throw SchemaError("A.csv", "line " + std::to_string(line_no) + ": non-numeric cell");
    }
    if (values.size() != static_cast<std::size_t>(1 + 2 * m * m))
      throw SchemaError("A.csv", "line " + std::to_string(line_no) + ": expected t plus re/im pairs for m*m entries");
    const std::size_t i = samples.size();
    if (i >= grid.size() || std::abs(values[0] - grid.point(i)) > tol)
      throw SchemaError("A.csv", "line " + std::to_string(line_no) + ": t does not match the problem grid");
    CMatrix s(m, m);
    for (Index e = 0; e < m * m; ++e)
      s(e / m, e % m) = cplx(values[static_cast<std::size_t>(1 + 2 * e)], values[static_cast<std::size_t>(2 + 2 * e)]);
    samples.push_back(std::move(s));
  }
  if (samples.size() != grid.size())
    throw SchemaError("A.csv", "expected " + std::to_string(grid.size()) + " sample rows, found " + std::to_string(samples.size()));
  return MatrixFunction(grid, std::move(samples));
}

// Re-emits every expression field from its parse tree.
void normalize_expressions(json& j) {
  if (j.is_array()) {
    for (auto& e : j) normalize_expressions(e);
  } else if (j.is_string()) {
    j = expr::parse(j.get<std::string>()).to_string();
  }
}

}  // namespace

ProblemFile::ProblemFile(json doc, std::filesystem::path base_dir) : doc_(std::move(doc)), base_dir_(std::move(base_dir)) {
  validate();
}

ProblemFile ProblemFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string(), "cannot open problem file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.parent_path());
}

ProblemFile ProblemFile::parse(std::string_view text, std::filesystem::path base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("(document)", std::string("malformed JSON: ") + e.what());
  }
  return ProblemFile(std::move(doc), std::move(base_dir));
}

void ProblemFile::validate() const { (void)interpret(doc_, base_dir_); }

Grid ProblemFile::grid(const LoadOptions& opts) const {
  const Interpreted in = interpret(doc_, base_dir_);
  std::size_t points = opts.grid_points.value_or(in.points);
  if (points < 5 || points % 2 == 0) throw SchemaError("--grid-points", "grid point count must be odd and >= 5");
  return Grid(in.a, in.b, points, in.p);
}

ProblemSpec ProblemFile::build(const LoadOptions& opts) const {
  const Interpreted in = interpret(doc_, base_dir_);
  const Grid g = grid(opts);
  const int layers = in.n - 1;

  MatrixFunction A = in.a_exprs ? expr::sample_matrix(*in.a_exprs, g, layers)
                                : differentiate(read_csv_samples(in.a_csv, g, in.m), layers);
  MatrixFunction f = in.f_exprs ? expr::sample_matrix(*in.f_exprs, g, layers) : MatrixFunction::zero(g, in.m, 1, layers);

  const BoundarySpec& bs = in.boundary;
  auto build_boundary = [&]() -> BoundaryOperator {
    const int n = in.n;
    if (bs.preset.empty()) {
      const MatrixFunction phi = bs.phi ? expr::sample_matrix(*bs.phi, g) : MatrixFunction::zero(g, in.r, in.m);
      return BoundaryOperator(bs.alphas, phi);
    }
    if (bs.preset == "initial_value") return presets::initial_value(g, in.m, n);
    if (bs.preset == "endpoint") return presets::endpoint(g, in.m, n);
    if (bs.preset == "periodic") return presets::periodic(g, in.m, n);
    if (bs.preset == "two_point") return presets::two_point(g, bs.m_a, bs.m_b, n);
    if (bs.preset == "multipoint") {
      std::vector<presets::PointCondition> pts;
      for (std::size_t i = 0; i < bs.points.size(); ++i) {
        const double t = bs.points[i].first;
        if (t < g.a() || t > g.b()) throw SchemaError("boundary.points[" + std::to_string(i) + "].t", "point outside [a, b]");
        pts.push_back({t, bs.points[i].second});
      }
      return presets::multipoint(g, pts, n);
    }
    if (bs.preset == "integral") return presets::integral(expr::sample_matrix(bs.kernel, g), n);
    if (bs.preset == "cauchy_padded") return presets::cauchy_padded(g, in.r, in.m, n);
    return presets::cauchy_truncated(g, in.r, in.m, n);
  };
  return make_problem(std::move(A), std::move(f), build_boundary(), in.c);
}

std::string ProblemFile::dump() const {
  json out = doc_;
  if (out["A"].is_array()) normalize_expressions(out["A"]);
  if (out.contains("f")) normalize_expressions(out["f"]);
  auto& b = out["boundary"];
  if (b.contains("kernel")) normalize_expressions(b["kernel"]);
  if (b.contains("phi")) normalize_expressions(b["phi"]);
  if (out["A"].is_object()) out["A"]["csv"] = (base_dir_ / out["A"]["csv"].get<std::string>()).string();
  return out.dump(2) + "\n";
}

MatrixFunction load_coefficient(const std::filesystem::path& path, const Grid& grid, Index m, int deriv_order) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string(), "cannot open direction file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("(document)", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("(root)", "expected an object");
  return expr::sample_matrix(expression_matrix(require(doc, "A", ""), m, m, "A"), grid, deriv_order);
}

}  // namespace fbvp::io
