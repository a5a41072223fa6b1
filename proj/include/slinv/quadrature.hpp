#pragma once

#include <functional>

namespace slinv {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  /// Number of equal panels the interval is split into before adapting.
  int initial_panels = 8;
  int max_panels = 20000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of f over [a, b].
/// Throws QuadratureError when the panel budget is exhausted before the
/// error estimate drops below max(abs_tol, rel_tol·|value|).
QuadratureResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                              const QuadratureOptions& opts = {});

/// Shorthand returning only the value.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

}  // namespace slinv
