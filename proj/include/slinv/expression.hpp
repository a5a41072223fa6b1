#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "slinv/ode.hpp"

namespace slinv {

/// A parsed arithmetic expression in one variable (x or t).
///
/// Grammar: + − * / ^ (right-associative), unary minus, parentheses, numeric
/// literals, the constants pi and e, and the functions exp, sin, cos, abs.
class Expression {
 public:
  /// Throws InvalidArgument with the offending position on a syntax error.
  static Expression parse(std::string_view text);

  double operator()(double x) const;
  const std::string& text() const { return text_; }
  PotentialFn as_function() const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// Named example potentials: zero, gaussian-bump, triangle, even-poly6,
/// trig-mix, poly65, sin4pi, final-mix. Throws InvalidArgument for unknown names.
PotentialFn builtin_potential(std::string_view name);
const std::vector<std::string>& builtin_names();

}  // namespace slinv
