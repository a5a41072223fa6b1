#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace slinv {

/// A real potential q(x) on [0, 1].
using PotentialFn = std::function<double(double)>;

/// Local error tolerances for the IVP solver, applied per component of (y, y')
/// of the solution scaled so that max(|y0|, |dy0|) = 1.
struct ToleranceTriple {
  double rel = 1e-10;
  double abs_y = 1e-10;
  double abs_dy = 1e-11;
};

struct IvpStats {
  int accepted_steps = 0;
  int rejected_steps = 0;
  long rhs_evals = 0;
};

/// Solution of -y'' + q y = λ y on [0, x_end], stored at accepted step ends
/// together with the Dormand–Prince continuous extension of every step.
class Trajectory {
 public:
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& dy() const { return dy_; }
  const IvpStats& stats() const { return stats_; }
  const ToleranceTriple& tolerance() const { return tol_; }

  double x_end() const { return x_.back(); }
  double y_end() const { return y_.back(); }
  double dy_end() const { return dy_.back(); }

  /// Dense-output value (y, y') at any x in [0, x_end].
  std::array<double, 2> at(double x) const;

 private:
  friend Trajectory integrate_ivp(const PotentialFn&, double, double, double, double,
                                  const ToleranceTriple&, std::span<const double>);
  std::vector<double> x_, y_, dy_;
  // Five interpolation coefficient pairs per step (rcont1..rcont5 for y and y').
  std::vector<std::array<double, 10>> dense_;
  IvpStats stats_;
  ToleranceTriple tol_;
};

/// Integrates the Schrödinger equation as the first-order system
/// (y, y')' = (y', (q - λ) y) with an adaptive Dormand–Prince 5(4) pair.
///
/// Steps are clipped so every point in `stops` (and x_end) is hit exactly, so
/// values there carry no interpolation error. Potentials with kinks or jumps
/// are integrated as-is: the controller shrinks the step around them, which
/// costs steps but keeps the requested local tolerance.
///
/// Throws IntegrationError on step-size underflow or a non-finite q(x).
Trajectory integrate_ivp(const PotentialFn& q, double lambda, double x_end, double y0,
                         double dy0, const ToleranceTriple& tol = {},
                         std::span<const double> stops = {});

struct FundamentalPair {
  double y1, dy1, y2, dy2;
};

/// y1 has initial data (1, 0) and y2 has (0, 1); both evaluated at x.
FundamentalPair fundamental_pair(const PotentialFn& q, double lambda, double x,
                                 const ToleranceTriple& tol = {});

}  // namespace slinv
