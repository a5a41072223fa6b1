#include "slinv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "slinv/error.hpp"
#include "slinv/quadrature.hpp"

namespace slinv {

using std::numbers::pi;

int SampleSet::mode() const {
  if (rows.empty()) throw InvalidArgument("empty sample set");
  int m = rows.front().mode;
  for (const auto& r : rows) m = std::min(m, r.mode);
  return m;
}

std::vector<double> SampleSet::points() const {
  std::vector<double> xs;
  xs.reserve(rows.size());
  for (const auto& r : rows) xs.push_back(r.x);
  return xs;
}

void SampleSet::validate() const {
  if (rows.empty()) throw InvalidArgument("sample set has no rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!(r.x > 0.0 && r.x <= 1.0)) throw InvalidArgument("sample point outside (0, 1]");
    if (!std::isfinite(r.lambda) || !std::isfinite(r.y))
      throw InvalidArgument("sample row has a non-finite value");
    if (r.mode < 1) throw InvalidArgument("sample mode must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (rows[j].mode == r.mode && !(rows[j].x < r.x))
        throw InvalidArgument("sample points must be strictly increasing within a mode");
  }
}

double mean_value(const PotentialFn& q) {
  QuadratureOptions qo;
  qo.initial_panels = 16;
  return integrate(q, 0.0, 1.0, qo);
}

double boundary_shot(const PotentialFn& q, double lambda, const ToleranceTriple& tol) {
  return integrate_ivp(q, lambda, 1.0, 0.0, 1.0, tol).y_end();
}

int count_sign_changes(const Trajectory& traj, int grid, double x_max) {
  std::vector<double> xs;
  for (double x : traj.x())
    if (x > 0.0 && x <= x_max) xs.push_back(x);
  const double span = std::min(x_max, traj.x_end());
  for (int i = 1; i <= grid; ++i) {
    const double x = span * i / grid;
    if (x <= x_max) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  int changes = 0;
  int sign = 0;
  for (double x : xs) {
    const double y = traj.at(x)[0];
    const int s = (y > 0.0) - (y < 0.0);
    if (s == 0) continue;
    if (sign != 0 && s != sign) ++changes;
    sign = s;
  }
  return changes;
}

int oscillation_count(const PotentialFn& q, double lambda, const ToleranceTriple& tol) {
  const Trajectory t = integrate_ivp(q, lambda, 1.0, 0.0, 1.0, tol);
  const int grid = 64 + 16 * static_cast<int>(std::sqrt(std::max(0.0, lambda)));
  return count_sign_changes(t, grid, 1.0);
}

namespace {

constexpr double kInteriorMargin = 1e-4;

EigenPair solve_mode(const PotentialFn& q, int k, const EigenOptions& opts, double mean,
                     double scan_step) {
  const auto& ivp = opts.ivp;
  const double guess = (k * pi) * (k * pi) + mean;
  double lo, hi;
  int expansions = 0;
  constexpr int kMaxExpansions = 400;
  auto fail = [&](double a, double b) {
    std::ostringstream os;
    os << "could not bracket eigenvalue " << k << " in window [" << a << ", " << b << "]";
    throw EigenvalueError(os.str());
  };
  if (oscillation_count(q, guess, ivp) >= k) {
    hi = guess;
    lo = guess - scan_step;
    while (oscillation_count(q, lo, ivp) >= k) {
      hi = lo;
      lo -= scan_step * (1 + expansions / 16);
      if (++expansions > kMaxExpansions) fail(lo, guess);
    }
  } else {
    lo = guess;
    hi = guess + scan_step;
    while (oscillation_count(q, hi, ivp) < k) {
      lo = hi;
      hi += scan_step * (1 + expansions / 16);
      if (++expansions > kMaxExpansions) fail(guess, hi);
    }
  }

  // Count bisection isolates λ_k: afterwards (lo, hi] contains exactly one eigenvalue.
  while (hi - lo > 1e-3 * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    (oscillation_count(q, mid, ivp) >= k ? hi : lo) = mid;
  }

  // Illinois regula falsi on the boundary shot.
  double f_lo = boundary_shot(q, lo, ivp);
  double f_hi = boundary_shot(q, hi, ivp);
  double lambda = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  double f = std::min(std::abs(f_lo), std::abs(f_hi));
  if (f_lo * f_hi < 0.0) {
    int side = 0;
    for (int it = 0; it < 200; ++it) {
      lambda = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
      if (!(lambda > lo && lambda < hi)) lambda = 0.5 * (lo + hi);
      const double fm = boundary_shot(q, lambda, ivp);
      f = std::abs(fm);
      if (f <= opts.tol * 1e-2 || hi - lo <= 4e-15 * std::max(1.0, std::abs(lambda))) break;
      if (fm * f_hi > 0.0) {
        hi = lambda;
        f_hi = fm;
        if (side == 1) f_lo *= 0.5;
        side = 1;
      } else {
        lo = lambda;
        f_lo = fm;
        if (side == -1) f_hi *= 0.5;
        side = -1;
      }
    }
  }

  const Trajectory traj = integrate_ivp(q, lambda, 1.0, 0.0, 1.0, ivp);
  EigenPair pair;
  pair.mode = k;
  pair.lambda = lambda;
  pair.boundary_residual = std::abs(traj.y_end());
  pair.zero_count = count_sign_changes(traj, 10000, 1.0 - kInteriorMargin);
  pair.asymptotic_residual = lambda - (k * pi) * (k * pi) - mean;
  return pair;
}

}  // namespace

EigenPair eigenvalue(const PotentialFn& q, int k, const EigenOptions& opts) {
  if (k < 1) throw InvalidArgument("eigenvalue: mode index must be >= 1");
  if (!(opts.tol > 0.0)) throw InvalidArgument("eigenvalue: tolerance must be positive");
  const double mean = mean_value(q);
  double step = pi * pi;
  for (int attempt = 0; attempt < 3; ++attempt, step *= 0.25) {
    EigenPair pair = solve_mode(q, k, opts, mean, step);
    if (pair.zero_count == k - 1 && pair.boundary_residual <= opts.tol) return pair;
  }
  throw EigenvalueError("eigenvalue " + std::to_string(k) +
                        " failed its zero-count or boundary certificate");
}

SampleSet sample_eigenfunction(const PotentialFn& q, int k, std::span<const double> points,
                               std::optional<NoiseSpec> noise, const EigenOptions& opts) {
  if (points.empty()) throw InvalidArgument("sample_eigenfunction: no sample points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i] > 0.0 && points[i] <= 1.0))
      throw InvalidArgument("sample_eigenfunction: points must lie in (0, 1]");
    if (i > 0 && !(points[i - 1] < points[i]))
      throw InvalidArgument("sample_eigenfunction: points must be strictly increasing");
  }
  const EigenPair pair = eigenvalue(q, k, opts);
  const Trajectory traj = integrate_ivp(q, pair.lambda, points.back(), 0.0, 1.0, opts.ivp, points);

  SampleSet set;
  set.noise = noise;
  std::mt19937_64 rng(noise ? noise->seed : 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double x : points) {
    double y = traj.at(x)[0];
    if (noise) y *= 1.0 + noise->sigma * normal(rng);
    set.rows.push_back({x, pair.lambda, y, k});
  }
  return set;
}

double asymptotic_residual(const PotentialFn& q, int k, const EigenOptions& opts) {
  return eigenvalue(q, k, opts).asymptotic_residual;
}

}  // namespace slinv
