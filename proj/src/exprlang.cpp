#include "fbvp/exprlang.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <variant>

namespace fbvp::expr {

namespace {

enum class Fn { Sin, Cos, Exp, Log, Sqrt, Abs };

constexpr std::array<std::pair<std::string_view, Fn>, 6> kFunctions{{
    {"sin", Fn::Sin}, {"cos", Fn::Cos}, {"exp", Fn::Exp}, {"log", Fn::Log}, {"sqrt", Fn::Sqrt}, {"abs", Fn::Abs}}};

std::string_view name_of(Fn fn) {
  for (const auto& [name, f] : kFunctions)
    if (f == fn) return name;
  return "?";
}

struct Literal {
  double value;
};
struct Variable {};
struct Constant {
  std::string_view name;
  cplx value;
};
struct Negate {
  std::shared_ptr<const Expr::Node> arg;
};
struct Binary {
  char op;
  std::shared_ptr<const Expr::Node> lhs, rhs;
};
struct Call {
  Fn fn;
  std::shared_ptr<const Expr::Node> arg;
};

std::string format_literal(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

cplx checked(cplx v, const char* what, double t) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainFault(std::string(what) + " is not finite", t);
  return v;
}

cplx int_power(cplx base, long k, double t) {
  if (k < 0) {
    if (base == cplx(0)) throw DomainFault("zero raised to a negative power", t);
    return cplx(1) / int_power(base, -k, t);
  }
  cplx acc(1), sq = base;
  while (k > 0) {
    if (k & 1) acc *= sq;
    sq *= sq;
    k >>= 1;
  }
  return acc;
}

}  // namespace

struct Expr::Node {
  std::variant<Literal, Variable, Constant, Negate, Binary, Call> v;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

template <typename T>
NodePtr make(T value) {
  return std::make_shared<const Expr::Node>(Expr::Node{std::move(value)});
}

cplx eval(const Expr::Node& node, double t) {
  return std::visit(
      [t](const auto& n) -> cplx {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Literal>) {
          return n.value;
        } else if constexpr (std::is_same_v<N, Variable>) {
          return t;
        } else if constexpr (std::is_same_v<N, Constant>) {
          return n.value;
        } else if constexpr (std::is_same_v<N, Negate>) {
          return cplx(0) - eval(*n.arg, t);
        } else if constexpr (std::is_same_v<N, Binary>) {
          const cplx l = eval(*n.lhs, t);
          const cplx r = eval(*n.rhs, t);
          switch (n.op) {
            case '+': return checked(l + r, "sum", t);
            case '-': return checked(l - r, "difference", t);
            case '*': return checked(l * r, "product", t);
            case '/':
              if (r == cplx(0)) throw DomainFault("division by zero", t);
              return checked(l / r, "quotient", t);
            default: {
              if (r.imag() == 0.0 && std::abs(r.real()) <= 64.0 && r.real() == std::round(r.real()))
                return checked(int_power(l, static_cast<long>(r.real()), t), "power", t);
              if (l == cplx(0)) {
                if (r.real() > 0.0) return cplx(0);
                throw DomainFault("zero raised to a non-positive power", t);
              }
              return checked(std::pow(l, r), "power", t);
            }
          }
        } else {
          const cplx x = eval(*n.arg, t);
          switch (n.fn) {
            case Fn::Sin: return checked(std::sin(x), "sin", t);
            case Fn::Cos: return checked(std::cos(x), "cos", t);
            case Fn::Exp: return checked(std::exp(x), "exp", t);
            case Fn::Log:
              if (x == cplx(0)) throw DomainFault("log of zero", t);
              return checked(std::log(x), "log", t);
            case Fn::Sqrt: return checked(std::sqrt(x), "sqrt", t);
            case Fn::Abs: return std::abs(x);
          }
          return {};
        }
      },
      node.v);
}

std::string print(const Expr::Node& node) {
  return std::visit(
      [](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Literal>) {
          return format_literal(n.value);
        } else if constexpr (std::is_same_v<N, Variable>) {
          return "t";
        } else if constexpr (std::is_same_v<N, Constant>) {
          return std::string(n.name);
        } else if constexpr (std::is_same_v<N, Negate>) {
          return "(-" + print(*n.arg) + ")";
        } else if constexpr (std::is_same_v<N, Binary>) {
          return "(" + print(*n.lhs) + n.op + print(*n.rhs) + ")";
        } else {
          return std::string(name_of(n.fn)) + "(" + print(*n.arg) + ")";
        }
      },
      node.v);
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr root = parse_sum();
    skip_space();
    if (pos_ != src_.size()) fail("expected operator or end of input");
    return root;
  }

 private:
  static constexpr int kMaxDepth = 200;

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) p.fail("expression nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
  };

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    DepthGuard guard(*this);
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make(Binary{'+', lhs, parse_product()});
      } else if (accept('-')) {
        lhs = make(Binary{'-', lhs, parse_product()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Binary{'*', lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make(Binary{'/', lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    DepthGuard guard(*this);
    if (accept('-')) return make(Negate{parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make(Binary{'^', base, parse_unary()});
    return base;
  }

  NodePtr parse_primary() {
    DepthGuard guard(*this);
    skip_space();
    if (pos_ >= src_.size()) fail("expected number, identifier or '('");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("expected number, identifier or '('");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ - start == 1 && src_[start] == '.') {
      pos_ = start;
      fail("expected digits in number");
    }
    // An exponent is only consumed when digits follow, so "2e" stays an error
    // rather than silently meaning 2*e.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec == std::errc::result_out_of_range || !std::isfinite(value)) {
      pos_ = start;
      fail("numeric literal out of range");
    }
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return make(Literal{value});
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "t") return make(Variable{});
    if (name == "pi") return make(Constant{"pi", std::numbers::pi});
    if (name == "e") return make(Constant{"e", std::numbers::e});
    if (name == "i") return make(Constant{"i", cplx(0, 1)});
    for (const auto& [fname, fn] : kFunctions) {
      if (name == fname) {
        if (!accept('(')) fail("expected '(' after function name");
        NodePtr arg = parse_sum();
        if (!accept(')')) fail("expected ')'");
        return make(Call{fn, arg});
      }
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

cplx Expr::evaluate(double t) const { return eval(*root_, t); }

std::string Expr::to_string() const { return print(*root_); }

Expr parse(std::string_view src) { return Expr(Parser(src).parse_all()); }

MatrixFunction sample(const Expr& e, const Grid& grid, int deriv_order) {
  return sample_matrix({{e}}, grid, deriv_order);
}

MatrixFunction sample_matrix(const std::vector<std::vector<Expr>>& entries, const Grid& grid, int deriv_order) {
  if (entries.empty() || entries.front().empty()) throw DimensionMismatch("expression matrix is empty");
  const auto rows = static_cast<Index>(entries.size());
  const auto cols = static_cast<Index>(entries.front().size());
  for (const auto& row : entries)
    if (static_cast<Index>(row.size()) != cols) throw DimensionMismatch("expression matrix rows differ in length");
  MatrixFunction f = MatrixFunction::generate(grid, rows, cols, [&](double t) {
    CMatrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) m(r, c) = entries[r][c].evaluate(t);
    return m;
  });
  return differentiate(std::move(f), deriv_order);
}

}  // namespace fbvp::expr
