#include "slinv/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "slinv/error.hpp"

namespace slinv {
namespace {

// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss points.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                              const QuadratureOptions& opts) {
  if (a == b) return {};
  const int n0 = std::max(1, opts.initial_panels);
  std::priority_queue<Panel> heap;
  double value = 0.0;
  double error = 0.0;
  for (int i = 0; i < n0; ++i) {
    const double lo = a + (b - a) * i / n0;
    const double hi = (i + 1 == n0) ? b : a + (b - a) * (i + 1) / n0;
    Panel p = gk15(f, lo, hi);
    value += p.value;
    error += p.error;
    heap.push(p);
  }
  int panels = n0;
  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };
  while (error > target()) {
    if (panels >= opts.max_panels) {
      throw QuadratureError("quadrature did not converge on [" + std::to_string(a) + ", " +
                            std::to_string(b) + "], error estimate " + std::to_string(error));
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
    if (!std::isfinite(value)) throw QuadratureError("non-finite integrand");
  }
  // Re-sum to shed the drift accumulated by incremental updates.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error, panels};
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  return integrate_gk(f, a, b, opts).value;
}

}  // namespace slinv
