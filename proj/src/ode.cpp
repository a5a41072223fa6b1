#include "slinv/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slinv/error.hpp"

namespace slinv {
namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer & Wanner, DOPRI5 dense output).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct State {
  double y, dy;
};

struct Rhs {
  const PotentialFn& q;
  double lambda;
  long* evals;

  State operator()(double x, State s) const {
    ++*evals;
    const double qx = q(x);
    if (!std::isfinite(qx)) throw IntegrationError("non-finite potential value", x);
    return {s.dy, (qx - lambda) * s.y};
  }
};

State axpy(State s, double h, std::initializer_list<std::pair<double, State>> terms) {
  for (const auto& [c, k] : terms) {
    s.y += h * c * k.y;
    s.dy += h * c * k.dy;
  }
  return s;
}

}  // namespace

std::array<double, 2> Trajectory::at(double x) const {
  if (x <= x_.front()) return {y_.front(), dy_.front()};
  if (x >= x_.back()) return {y_.back(), dy_.back()};
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double th = (x - x_[i]) / h;
  const double th1 = 1.0 - th;
  const auto& r = dense_[i];
  std::array<double, 2> out{};
  for (int c = 0; c < 2; ++c) {
    const double* rc = r.data() + 5 * c;
    out[c] = rc[0] + th * (rc[1] + th1 * (rc[2] + th * (rc[3] + th1 * rc[4])));
  }
  return out;
}

Trajectory integrate_ivp(const PotentialFn& q, double lambda, double x_end, double y0,
                         double dy0, const ToleranceTriple& tol,
                         std::span<const double> stops) {
  if (!(x_end > 0.0)) throw InvalidArgument("integrate_ivp: x_end must be positive");
  if (!(tol.rel > 0.0 && tol.abs_y > 0.0 && tol.abs_dy > 0.0))
    throw InvalidArgument("integrate_ivp: tolerances must be positive");

  std::vector<double> targets;
  for (double s : stops)
    if (s > 0.0 && s < x_end) targets.push_back(s);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  targets.push_back(x_end);

  Trajectory traj;
  traj.tol_ = tol;
  Rhs f{q, lambda, &traj.stats_.rhs_evals};

  // The controller runs on initial data scaled to unit size, so the step
  // sequence, and hence the result, is exactly linear in (y0, dy0).
  const double scale = std::max(std::abs(y0), std::abs(dy0)) > 0.0
                           ? std::max(std::abs(y0), std::abs(dy0))
                           : 1.0;
  double x = 0.0;
  State s{y0 / scale, dy0 / scale};
  traj.x_.push_back(x);
  traj.y_.push_back(s.y);
  traj.dy_.push_back(s.dy);

  State k1 = f(x, s);
  double h = std::min(x_end, 0.05 / (1.0 + std::sqrt(std::abs(lambda))));
  std::size_t next = 0;
  bool last_rejected = false;

  while (next < targets.size()) {
    const double target = targets[next];
    const double h_free = h;
    bool hits_target = false;
    if (x + h >= target || target - (x + h) < 1e-12) {
      h = target - x;
      hits_target = true;
    }
    if (h < 1e-14 || x + h == x) throw IntegrationError("step size underflow", x);

    const State k2 = f(x + c2 * h, axpy(s, h, {{a21, k1}}));
    const State k3 = f(x + c3 * h, axpy(s, h, {{a31, k1}, {a32, k2}}));
    const State k4 = f(x + c4 * h, axpy(s, h, {{a41, k1}, {a42, k2}, {a43, k3}}));
    const State k5 = f(x + c5 * h, axpy(s, h, {{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}}));
    const State k6 =
        f(x + h, axpy(s, h, {{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}}));
    const State s_new = axpy(s, h, {{a71, k1}, {a73, k3}, {a74, k4}, {a75, k5}, {a76, k6}});
    const double x_new = hits_target ? target : x + h;
    const State k7 = f(x_new, s_new);

    const State err = axpy(State{0.0, 0.0}, h,
                           {{e1, k1}, {e3, k3}, {e4, k4}, {e5, k5}, {e6, k6}, {e7, k7}});
    const double sc_y = tol.abs_y + tol.rel * std::max(std::abs(s.y), std::abs(s_new.y));
    const double sc_dy = tol.abs_dy + tol.rel * std::max(std::abs(s.dy), std::abs(s_new.dy));
    const double err_norm =
        std::sqrt(0.5 * (std::pow(err.y / sc_y, 2) + std::pow(err.dy / sc_dy, 2)));
    if (!std::isfinite(err_norm)) throw IntegrationError("non-finite solution", x);

    double fac = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
    fac = std::clamp(fac, 0.2, 5.0);

    if (err_norm <= 1.0) {
      std::array<double, 10> r{};
      const double ys[2][2] = {{s.y, s_new.y}, {s.dy, s_new.dy}};
      const double k1c[2] = {k1.y, k1.dy}, k3c[2] = {k3.y, k3.dy}, k4c[2] = {k4.y, k4.dy},
                   k5c[2] = {k5.y, k5.dy}, k6c[2] = {k6.y, k6.dy}, k7c[2] = {k7.y, k7.dy};
      for (int c = 0; c < 2; ++c) {
        double* rc = r.data() + 5 * c;
        rc[0] = ys[c][0];
        rc[1] = ys[c][1] - ys[c][0];
        rc[2] = h * k1c[c] - rc[1];
        rc[3] = rc[1] - h * k7c[c] - rc[2];
        rc[4] = h * (d1 * k1c[c] + d3 * k3c[c] + d4 * k4c[c] + d5 * k5c[c] + d6 * k6c[c] +
                     d7 * k7c[c]);
      }
      traj.dense_.push_back(r);
      x = x_new;
      s = s_new;
      k1 = k7;
      traj.x_.push_back(x);
      traj.y_.push_back(s.y);
      traj.dy_.push_back(s.dy);
      ++traj.stats_.accepted_steps;
      if (hits_target) ++next;
      if (last_rejected) fac = std::min(fac, 1.0);
      last_rejected = false;
      h = hits_target ? std::max(h * fac, h_free) : h * fac;
    } else {
      ++traj.stats_.rejected_steps;
      last_rejected = true;
      h *= std::min(fac, 1.0);
    }
  }
  if (scale != 1.0) {
    for (double& v : traj.y_) v *= scale;
    for (double& v : traj.dy_) v *= scale;
    for (auto& r : traj.dense_)
      for (double& v : r) v *= scale;
  }
  return traj;
}

FundamentalPair fundamental_pair(const PotentialFn& q, double lambda, double x,
                                 const ToleranceTriple& tol) {
  if (!(x > 0.0 && x <= 1.0)) throw InvalidArgument("fundamental_pair: x must lie in (0, 1]");
  const Trajectory t1 = integrate_ivp(q, lambda, x, 1.0, 0.0, tol);
  const Trajectory t2 = integrate_ivp(q, lambda, x, 0.0, 1.0, tol);
  return {t1.y_end(), t1.dy_end(), t2.y_end(), t2.dy_end()};
}

}  // namespace slinv
