// Acceptance suite: one PASS/FAIL line per criterion, exit status = number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "slinv/basis.hpp"
#include "slinv/design.hpp"
#include "slinv/expression.hpp"
#include "slinv/frechet.hpp"
#include "slinv/inversion.hpp"
#include "slinv/model_select.hpp"
#include "slinv/spectral.hpp"

using oracle::kPi;
using slinv::Basis;
using slinv::BasisFunction;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::shared_ptr<const Basis> share(Basis b) { return std::make_shared<const Basis>(std::move(b)); }

double sup_error(const slinv::PotentialFn& p, const slinv::PotentialFn& q) {
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) worst = std::max(worst, std::abs(p(i / 1000.0) - q(i / 1000.0)));
  return worst;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Coefficients of the L² projection onto an orthogonal family via Simpson.
Eigen::VectorXd simpson_projection(const slinv::PotentialFn& f, const Basis& b) {
  Eigen::VectorXd d(b.size());
  for (int l = 0; l < b.size(); ++l) {
    const auto phi = b[l];
    d[l] = oracle::simpson([&](double x) { return f(x) * phi(x); }, 0, 1) /
           oracle::simpson([&](double x) { return phi(x) * phi(x); }, 0, 1);
  }
  return d;
}

Outcome forward_exactness() {
  const slinv::PotentialFn zero = [](double) { return 0.0; };
  std::vector<double> grid;
  for (int i = 1; i <= 100; ++i) grid.push_back(i / 100.0);
  double lam_err = 0.0, y_err = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const auto s = slinv::sample_eigenfunction(zero, k, grid);
    const double exact = k * k * kPi * kPi;
    lam_err = std::max(lam_err, std::abs(s.rows[0].lambda - exact) / exact);
    for (const auto& r : s.rows) y_err = std::max(y_err, std::abs(r.y - std::sin(k * kPi * r.x) / (k * kPi)));
  }
  return {lam_err <= 1e-8 && y_err <= 1e-6,
          fmt("max rel eigenvalue error %.2e (<= 1e-8), max sup y2 error %.2e (<= 1e-6)", lam_err, y_err)};
}

Outcome asymptotics() {
  std::ostringstream detail;
  bool pass = true;
  for (const char* name : {"gaussian-bump", "trig-mix"}) {
    const auto q = slinv::builtin_potential(name);
    double running_min = INFINITY;
    std::vector<int> violations;
    for (int k = 1; k <= 10; ++k) {
      const double a = std::abs(slinv::asymptotic_residual(q, k));
      if (!std::isfinite(a)) {
        pass = false;
        violations.push_back(k);
        continue;
      }
      if (k > 1 && a > 2.0 * running_min) violations.push_back(k);
      if (k == 2 || k == 5 || k == 10) detail << name << " |a" << k << "|=" << fmt("%.2e", a) << " ";
      running_min = std::min(running_min, a);
    }
    detail << "[" << name << " violations:";
    if (violations.empty()) detail << " none";
    for (int k : violations) detail << " k=" << k;
    detail << "] ";
    pass = pass && violations.empty();
  }
  return {pass, detail.str()};
}

Outcome gradient_check() {
  const auto q = oracle::gaussian_bump;
  const double lambda = slinv::eigenvalue(q, 1).lambda;
  const slinv::PotentialFn dirs[] = {
      [](double) { return 1.0; },
      [](double x) { return std::cos(2 * kPi * x); },
      [](double x) { return slinv::legendre_p(2, 2 * x - 1); },
  };
  double worst4 = 0.0, worst_excess = -INFINITY;
  for (const auto& v : dirs) {
    for (double x : {0.5, 1.0}) {
      const double d = slinv::frechet_apply(q, v, x, lambda, true);
      auto err = [&](double eps) {
        auto qp = [&](double t) { return q(t) + eps * v(t); };
        auto qm = [&](double t) { return q(t) - eps * v(t); };
        const double fd = (slinv::integrate_ivp(qp, lambda, x, 0.0, 1.0).y_end() -
                           slinv::integrate_ivp(qm, lambda, x, 0.0, 1.0).y_end()) /
                          (2 * eps);
        return std::abs(fd - d);
      };
      const double e3 = err(1e-3), e4 = err(1e-4);
      worst4 = std::max(worst4, e4);
      // O(ε²): a tenfold smaller ε must cut the error 100× down to the solver floor.
      worst_excess = std::max(worst_excess, e4 - (e3 / 100.0 + 1e-11));
    }
  }
  return {worst4 <= 1e-5 && worst_excess <= 0.0,
          fmt("max error at eps=1e-4 %.2e (<= 1e-5); O(eps^2) bound e(1e-4) <= e(1e-3)/100 + 1e-11 %s",
              worst4, worst_excess <= 0.0 ? "holds" : "violated")};
}

Outcome example_one() {
  const auto q = oracle::gaussian_bump;
  auto b = share(Basis::cosine_even(3));
  const Eigen::VectorXd target = simpson_projection(q, *b);
  struct Run {
    const char* label;
    int mode;
    bool optimized;
    double limit;
  };
  const Run runs[] = {{"mode 1 optimized", 1, true, 2e-2}, {"mode 2 optimized", 2, true, 5e-2},
                      {"mode 1 equal", 1, false, 5e-2}};
  bool pass = true;
  std::ostringstream detail;
  for (const auto& r : runs) {
    const auto pts = r.optimized ? slinv::optimize_points(r.mode, *b).points : slinv::equally_spaced(3);
    const auto rep = slinv::invert(slinv::sample_eigenfunction(q, r.mode, pts), b);
    const double dist = slinv::l2_norm(slinv::Potential(b, rep.recovered.coefficients() - target));
    pass = pass && rep.converged && dist <= r.limit;
    detail << r.label << " L2 " << fmt("%.2e", dist) << " (<= " << r.limit << ")"
           << (rep.converged ? "" : " not converged") << "; ";
  }
  return {pass, detail.str()};
}

Outcome exact_recovery() {
  struct Run {
    const char* name;
    std::shared_ptr<const Basis> basis;
  };
  const Run runs[] = {{"poly65", share(Basis::legendre(7))}, {"even-poly6", share(Basis::legendre_even(4))}};
  bool pass = true;
  std::ostringstream detail;
  for (const auto& r : runs) {
    const auto q = slinv::builtin_potential(r.name);
    const auto pts = slinv::optimize_points(1, *r.basis).points;
    const auto rep = slinv::invert(slinv::sample_eigenfunction(q, 1, pts), r.basis);
    const double sup = sup_error(rep.recovered.as_function(), q);
    const double last = rep.max_delta.back();
    pass = pass && sup <= 1e-3 && rep.iterations <= 10 && last <= 1e-4;
    detail << r.name << " sup " << fmt("%.2e", sup) << ", " << rep.iterations << " iterations, final max|delta| "
           << fmt("%.1e", last) << "; ";
  }
  return {pass, detail.str()};
}

Outcome basis_selection() {
  const auto q = slinv::builtin_potential("sin4pi");
  auto leg = share(Basis::legendre(4));
  auto trig = share(Basis::trig_full(4));
  bool ordered = true;
  double trig_sup = 0.0;
  std::ostringstream detail;
  for (const auto& [label, design] : {std::pair{"Legendre-designed", leg}, std::pair{"trig-designed", trig}}) {
    const auto s = slinv::sample_eigenfunction(q, 1, slinv::optimize_points(1, *design).points);
    std::vector<slinv::InversionReport> rs = {slinv::invert(s, leg), slinv::invert(s, trig)};
    const auto rank = slinv::rank_reconstructions(rs);
    ordered = ordered && rank[0].index == 1;
    trig_sup = std::max(trig_sup, sup_error(rs[1].recovered.as_function(), q));
    detail << label << " points: L2 trig " << fmt("%.4f", slinv::l2_norm(rs[1].recovered)) << " vs Legendre "
           << fmt("%.4f", slinv::l2_norm(rs[0].recovered)) << " -> " << (rank[0].index == 1 ? "trig" : "Legendre")
           << " first; ";
  }
  detail << "trig sup error " << fmt("%.2e", trig_sup) << " (<= 1e-3)";
  return {ordered && trig_sup <= 1e-3, detail.str()};
}

Outcome final_merge() {
  const auto q = slinv::builtin_potential("final-mix");
  auto leg = share(Basis::legendre(4));
  auto trig = share(Basis::trig_full(4));
  const auto s = slinv::sample_eigenfunction(q, 1, slinv::optimize_points(1, *leg).points);
  std::vector<slinv::InversionReport> rs = {slinv::invert(s, leg), slinv::invert(s, trig)};
  auto merged = share(slinv::merge_top_functions(rs, 4));
  const auto s2 = slinv::sample_eigenfunction(q, 1, slinv::optimize_points(1, *merged).points);
  const auto rep = slinv::invert(s2, merged);
  const double sup = sup_error(rep.recovered.as_function(), q);
  const auto& fs = merged->functions();
  auto has = [&](const BasisFunction& f) { return std::find(fs.begin(), fs.end(), f) != fs.end(); };
  const bool members = has(BasisFunction::constant()) && has(BasisFunction::legendre(2)) && has(BasisFunction::sin(2));
  std::string labels;
  for (const auto& f : fs) labels += (labels.empty() ? "" : ", ") + f.label();
  return {members && sup <= 1e-3,
          fmt("merged {%s}; contains 1, P2, sin(4pi x): %s; re-inversion sup error %.2e (<= 1e-3)", labels.c_str(),
              members ? "yes" : "no", sup)};
}

Outcome jacobian_health() {
  int healthy = 0, total = 0;
  double smallest = INFINITY;
  for (int k = 1; k <= 2; ++k) {
    for (int n = 3; n <= 8; ++n) {
      const std::vector<double> lams(static_cast<std::size_t>(n), k * k * kPi * kPi);
      const auto j = slinv::assemble_jacobian(slinv::equally_spaced(n), lams, Basis::cosine_even(n));
      const double s = j.singular_values[n - 1];
      smallest = std::min(smallest, s);
      healthy += s > 1e-10;
      ++total;
    }
  }
  bool design_ok = true;
  std::ostringstream cond;
  for (int n = 3; n <= 4; ++n) {
    const auto b = Basis::cosine_even(n);
    const auto best = slinv::optimize_points(1, b);
    const double base = slinv::condition_number(slinv::equally_spaced(n), 1, b);
    design_ok = design_ok && best.condition_number <= base;
    cond << " n=" << n << " " << fmt("%.3g", best.condition_number) << " vs " << fmt("%.3g", base);
  }
  return {healthy == total && design_ok,
          fmt("sigma_min > 1e-10 in %d/%d evenly spaced configurations (smallest %.1e); optimizer vs baseline:%s",
              healthy, total, smallest, cond.str().c_str())};
}

Outcome pinv_contract() {
  auto b = share(Basis::cosine_even(3));
  // Two samples 1e-6 apart make two Jacobian rows nearly equal.
  const std::vector<double> pts = {0.3, 0.6, 0.600001};
  const auto rep = slinv::invert(slinv::sample_eigenfunction(oracle::gaussian_bump, 1, pts), b);
  const bool finite = rep.recovered.coefficients().allFinite();
  return {rep.dropped_singular_values >= 1 && finite,
          fmt("dropped %d singular value(s), sigma_min %.1e, coefficients finite: %s, converged: %s",
              rep.dropped_singular_values, rep.singular_values[rep.singular_values.size() - 1],
              finite ? "yes" : "no", rep.converged ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
    double time_limit;  // seconds; 0 = none
  };
  const Criterion criteria[] = {
      {1, "forward exactness", forward_exactness, 5},
      {2, "asymptotic residual trend", asymptotics, 0},
      {3, "Frechet gradient check", gradient_check, 30},
      {4, "gaussian bump reconstruction", example_one, 60},
      {5, "exact recovery", exact_recovery, 0},
      {6, "basis selection", basis_selection, 0},
      {7, "final merge", final_merge, 0},
      {8, "Jacobian health", jacobian_health, 0},
      {9, "pseudoinverse contract", pinv_contract, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0 && secs > c.time_limit) {
      o.pass = false;
      o.detail += fmt(" [over the %.0f s limit]", c.time_limit);
    }
    failed += !o.pass;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed;
}
