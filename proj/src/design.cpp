#include "slinv/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "slinv/error.hpp"
#include "slinv/frechet.hpp"

namespace slinv {

using std::numbers::pi;

namespace {

double unchecked_condition(const std::vector<double>& points, int k, const Basis& basis) {
  const std::vector<double> lambdas(points.size(), (k * pi) * (k * pi));
  return assemble_jacobian(points, lambdas, basis).condition_number();
}

// z ∈ ℝⁿ → ordered points: n gaps plus a right slack, softmax-weighted on top
// of the minimum gap. The slack logit is pinned to 0.
std::vector<double> to_points(const Eigen::VectorXd& z) {
  const auto n = z.size();
  const double zmax = std::max(0.0, z.maxCoeff());
  Eigen::VectorXd w = (z.array() - zmax).exp();
  const double slack = std::exp(-zmax);
  const double total = w.sum() + slack;
  const double free = 1.0 - static_cast<double>(n) * kMinPointGap;
  std::vector<double> xs(static_cast<std::size_t>(n));
  double x = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    x += kMinPointGap + free * w(i) / total;
    xs[static_cast<std::size_t>(i)] = std::min(x, 1.0);
  }
  return xs;
}

Eigen::VectorXd to_logits(const std::vector<double>& xs) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  const double free = 1.0 - static_cast<double>(n) * kMinPointGap;
  const double slack = std::max((1.0 - xs.back()) / free, 1e-9);
  Eigen::VectorXd z(n);
  double prev = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double gap = xs[static_cast<std::size_t>(i)] - prev;
    z(i) = std::log(std::max((gap - kMinPointGap) / free, 1e-9) / slack);
    prev = xs[static_cast<std::size_t>(i)];
  }
  return z;
}

class Search {
 public:
  Search(int k, const Basis& basis, int budget) : k_(k), basis_(basis), budget_(budget) {}

  bool exhausted() const { return evals_ >= budget_; }
  int evals() const { return evals_; }
  const PointConfiguration& best() const { return best_; }

  double evaluate(const std::vector<double>& xs) {
    ++evals_;
    const double c = unchecked_condition(xs, k_, basis_);
    if (best_.points.empty() || c < best_.condition_number) {
      best_.points = xs;
      best_.mode = k_;
      best_.condition_number = c;
    }
    return std::isfinite(c) ? std::log(c) : std::numeric_limits<double>::max();
  }

  void nelder_mead(const Eigen::VectorXd& start, int max_evals) {
    const auto n = start.size();
    const int stop_at = std::min(budget_, evals_ + max_evals);
    std::vector<Eigen::VectorXd> simplex{start};
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd v = start;
      v(i) += 0.5;
      simplex.push_back(v);
    }
    std::vector<double> f;
    for (const auto& v : simplex) {
      if (evals_ >= stop_at) return;
      f.push_back(evaluate(to_points(v)));
    }
    std::vector<std::size_t> order(simplex.size());
    while (evals_ < stop_at) {
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return f[a] < f[b]; });
      const std::size_t lo = order.front(), hi = order.back(), second = order[order.size() - 2];
      if (f[hi] - f[lo] < 1e-10) return;
      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (std::size_t i = 0; i < simplex.size(); ++i)
        if (i != hi) centroid += simplex[i];
      centroid /= static_cast<double>(n);

      const Eigen::VectorXd xr = centroid + (centroid - simplex[hi]);
      const double fr = evaluate(to_points(xr));
      if (fr < f[lo]) {
        if (evals_ >= stop_at) return;
        const Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[hi]);
        const double fe = evaluate(to_points(xe));
        if (fe < fr) {
          simplex[hi] = xe;
          f[hi] = fe;
        } else {
          simplex[hi] = xr;
          f[hi] = fr;
        }
        continue;
      }
      if (fr < f[second]) {
        simplex[hi] = xr;
        f[hi] = fr;
        continue;
      }
      if (evals_ >= stop_at) return;
      const Eigen::VectorXd xc = fr < f[hi] ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                            : Eigen::VectorXd(centroid + 0.5 * (simplex[hi] - centroid));
      const double fc = evaluate(to_points(xc));
      if (fc < std::min(fr, f[hi])) {
        simplex[hi] = xc;
        f[hi] = fc;
        continue;
      }
      // Shrink toward the best vertex.
      for (std::size_t i = 0; i < simplex.size(); ++i) {
        if (i == lo) continue;
        if (evals_ >= stop_at) return;
        simplex[i] = simplex[lo] + 0.5 * (simplex[i] - simplex[lo]);
        f[i] = evaluate(to_points(simplex[i]));
      }
    }
  }

 private:
  int k_;
  const Basis& basis_;
  int budget_;
  int evals_ = 0;
  PointConfiguration best_;
};

void check_points(std::vector<double>& xs) {
  if (xs.empty()) throw InvalidArgument("condition_number: no points");
  std::sort(xs.begin(), xs.end());
  if (!(xs.front() > 0.0 && xs.back() <= 1.0))
    throw InvalidArgument("condition_number: points must lie in (0, 1]");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] - xs[i - 1] < kMinPointGap)
      throw InvalidArgument("condition_number: points closer than the minimum gap");
}

}  // namespace

double condition_number(std::span<const double> points, int k, const Basis& basis) {
  if (k < 1) throw InvalidArgument("condition_number: mode must be >= 1");
  std::vector<double> xs(points.begin(), points.end());
  check_points(xs);
  if (static_cast<int>(xs.size()) != basis.size())
    throw InvalidArgument("condition_number: need one point per basis function");
  return unchecked_condition(xs, k, basis);
}

std::vector<double> equally_spaced(int n) {
  std::vector<double> xs;
  for (int i = 1; i <= n; ++i) xs.push_back(static_cast<double>(i) / (n + 1));
  return xs;
}

PointConfiguration optimize_points(int k, const Basis& basis, const DesignOptions& opts) {
  const int n = basis.size();
  if (k < 1) throw InvalidArgument("optimize_points: mode must be >= 1");
  if (opts.budget < 1) throw InvalidArgument("optimize_points: budget must be >= 1");

  if (n == 1) {
    const double lambda = (k * pi) * (k * pi);
    PointConfiguration best{{1.0}, k, 1.0};
    double best_entry = -1.0;
    for (int i = 1; i <= 1000; ++i) {
      const double x = i / 1000.0;
      const double lam[] = {lambda};
      const double xs[] = {x};
      const double entry = std::abs(assemble_jacobian(xs, lam, basis).matrix(0, 0));
      if (entry > best_entry) {
        best_entry = entry;
        best.points = {x};
      }
    }
    best.condition_number = best_entry > 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return best;
  }

  Search search(k, basis, opts.budget);
  const std::vector<double> baseline = equally_spaced(n);
  search.evaluate(baseline);

  const int starts = 4 + n;
  const int per_start = std::max(1, (opts.budget - 1) / starts);
  search.nelder_mead(to_logits(baseline), per_start);

  // Latin-hypercube starting configurations, sorted into increasing order.
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> strata(static_cast<std::size_t>(n));
  for (auto& column : strata) {
    column.resize(static_cast<std::size_t>(starts - 1));
    for (std::size_t s = 0; s < column.size(); ++s)
      column[s] = (static_cast<double>(s) + unit(rng)) / static_cast<double>(column.size());
    std::shuffle(column.begin(), column.end(), rng);
  }
  for (int s = 0; s + 1 < starts && !search.exhausted(); ++s) {
    std::vector<double> xs;
    for (const auto& column : strata) xs.push_back(column[static_cast<std::size_t>(s)]);
    std::sort(xs.begin(), xs.end());
    for (double& x : xs) x = 0.02 + 0.97 * x;
    search.nelder_mead(to_logits(xs), per_start);
  }
  // Leftover budget refines the incumbent.
  while (!search.exhausted()) {
    const int before = search.evals();
    search.nelder_mead(to_logits(search.best().points), opts.budget);
    if (search.evals() == before) break;
    if (search.evals() - before < n + 2) break;
  }
  return search.best();
}

}  // namespace slinv
