#pragma once

// A small arithmetic language in one real variable t with complex values:
//   literals, t, pi, e, i, + - * / ^, unary minus,
//   sin cos exp log sqrt abs.
// '^' is right-associative and binds tighter than unary minus.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fbvp/funcspace.hpp"

namespace fbvp::expr {

class Expr {
 public:
  struct Node;

  /// Evaluates at t; throws DomainFault on poles, log(0) or non-finite results.
  cplx evaluate(double t) const;

  /// Fully parenthesized source that reparses to an equivalent tree.
  std::string to_string() const;

  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

 private:
  std::shared_ptr<const Node> root_;
};

/// Recursive-descent parse; throws ParseError carrying the byte offset.
Expr parse(std::string_view src);

/// Samples on the grid and appends `deriv_order` stencil derivative layers.
MatrixFunction sample(const Expr& e, const Grid& grid, int deriv_order = 0);

/// Entry-wise sampling of a matrix of expressions (row-major nesting).
MatrixFunction sample_matrix(const std::vector<std::vector<Expr>>& entries, const Grid& grid, int deriv_order = 0);

}  // namespace fbvp::expr
