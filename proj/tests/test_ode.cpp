#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "slinv/error.hpp"
#include "slinv/ode.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using oracle::kPi;

namespace {
const slinv::PotentialFn zero = [](double) { return 0.0; };
}

TEST_CASE("free solution with lambda = pi^2", "[ode][closed-form]") {
  const auto t = slinv::integrate_ivp(zero, kPi * kPi, 1.0, 0.0, 1.0);
  CHECK_THAT(t.y_end(), WithinAbs(0.0, 1e-9));
  CHECK_THAT(t.dy_end(), WithinAbs(-1.0, 1e-9));
  CHECK(t.x().front() == 0.0);
  CHECK(t.x_end() == 1.0);
  for (std::size_t i = 1; i < t.x().size(); ++i) CHECK(t.x()[i] > t.x()[i - 1]);
}

TEST_CASE("constant potential closed form", "[ode][closed-form]") {
  const double c = 3.5, lambda = 30.0, w = std::sqrt(lambda - c);
  const auto t = slinv::integrate_ivp([c](double) { return c; }, lambda, 1.0, 0.0, 1.0);
  for (double x : {0.1, 0.37, 0.5, 0.82, 1.0}) {
    const auto v = t.at(x);
    CHECK_THAT(v[0], WithinAbs(std::sin(w * x) / w, 1e-9));
    CHECK_THAT(v[1], WithinAbs(std::cos(w * x), 1e-9));
  }
}

TEST_CASE("below-potential energy gives sinh growth", "[ode][closed-form]") {
  const double c = 10.0, lambda = 1.0, w = std::sqrt(c - lambda);
  const auto t = slinv::integrate_ivp([c](double) { return c; }, lambda, 1.0, 0.0, 1.0);
  CHECK_THAT(t.y_end(), WithinRel(std::sinh(w) / w, 1e-9));
}

TEST_CASE("fundamental pair at lambda = 4", "[ode][closed-form]") {
  const auto f = slinv::fundamental_pair(zero, 4.0, 1.0);
  CHECK_THAT(f.y1, WithinAbs(std::cos(2.0), 1e-10));
  CHECK_THAT(f.dy1, WithinAbs(-2.0 * std::sin(2.0), 1e-10));
  CHECK_THAT(f.y2, WithinAbs(std::sin(2.0) / 2.0, 1e-10));
  CHECK_THAT(f.dy2, WithinAbs(std::cos(2.0), 1e-10));
}

TEST_CASE("gaussian bump endpoint matches RK4 reference", "[ode][oracle]") {
  const auto t = slinv::integrate_ivp(oracle::gaussian_bump, 9.0, 1.0, 0.0, 1.0);
  const auto ref = oracle::rk4(oracle::gaussian_bump, 9.0, 1.0, 0.0, 1.0);
  CHECK_THAT(t.y_end(), WithinAbs(ref[0], 1e-6));
  CHECK_THAT(t.dy_end(), WithinAbs(ref[1], 1e-6));
}

TEST_CASE("linear potential fundamental pair matches RK4 reference", "[ode][oracle]") {
  auto q = [](double t) { return t; };
  const auto f = slinv::fundamental_pair(q, 10.0, 0.7);
  const auto r1 = oracle::rk4(q, 10.0, 0.7, 1.0, 0.0);
  const auto r2 = oracle::rk4(q, 10.0, 0.7, 0.0, 1.0);
  CHECK_THAT(f.y1, WithinAbs(r1[0], 1e-6));
  CHECK_THAT(f.dy1, WithinAbs(r1[1], 1e-6));
  CHECK_THAT(f.y2, WithinAbs(r2[0], 1e-6));
  CHECK_THAT(f.dy2, WithinAbs(r2[1], 1e-6));
}

TEST_CASE("Wronskian is conserved", "[ode][property]") {
  const slinv::PotentialFn qs[] = {
      zero,
      oracle::gaussian_bump,
      [](double t) { return t; },
      [](double t) { return 50.0 * std::sin(7.0 * t) - 20.0; },
  };
  for (const auto& q : qs) {
    for (double lambda : {-30.0, 0.0, 9.87, 100.0, 400.0}) {
      for (double x : {0.05, 0.5, 1.0}) {
        const auto f = slinv::fundamental_pair(q, lambda, x);
        const double w = f.y1 * f.dy2 - f.dy1 * f.y2;
        CHECK_THAT(w, WithinAbs(1.0, 1e-8));
      }
    }
  }
}

TEST_CASE("Wronskian with a kinked potential", "[ode][property]") {
  // No breakpoint splitting: the error near each kink is only controlled
  // relative to the size of the solution, so compare against |y1 dy2|.
  auto tri = [](double t) { return t < 0.5 ? 1.0 - std::abs(t - 0.25) : 1.0 - std::abs(t - 0.75); };
  for (double lambda : {-30.0, 0.0, 9.87, 100.0, 400.0}) {
    for (double x : {0.05, 0.5, 1.0}) {
      const auto f = slinv::fundamental_pair(tri, lambda, x);
      const double scale = std::max(1.0, std::abs(f.y1 * f.dy2) + std::abs(f.dy1 * f.y2));
      CHECK(std::abs(f.y1 * f.dy2 - f.dy1 * f.y2 - 1.0) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("solution is linear in the initial data", "[ode][property]") {
  const auto base = slinv::integrate_ivp(oracle::gaussian_bump, 40.0, 1.0, 0.3, -0.7);
  for (double a : {-2.5, 0.01, 7.0}) {
    const auto scaled = slinv::integrate_ivp(oracle::gaussian_bump, 40.0, 1.0, 0.3 * a, -0.7 * a);
    CHECK_THAT(scaled.y_end(), WithinRel(a * base.y_end(), 1e-10));
    CHECK_THAT(scaled.dy_end(), WithinRel(a * base.dy_end(), 1e-10));
    const auto m0 = base.at(0.4321), m1 = scaled.at(0.4321);
    CHECK_THAT(m1[0], WithinRel(a * m0[0], 1e-10));
  }
}

TEST_CASE("tightening the tolerance never increases the error", "[ode][property]") {
  struct Case {
    slinv::PotentialFn q;
    double lambda;
  };
  const Case cases[] = {
      {oracle::gaussian_bump, 9.0},
      {oracle::gaussian_bump, 400.0},
      {[](double t) { return t; }, 10.0},
  };
  for (const auto& c : cases) {
    const auto ref = oracle::rk4(c.q, c.lambda, 1.0, 0.0, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    slinv::ToleranceTriple tol{1e-6, 1e-6, 1e-7};
    for (int i = 0; i < 14; ++i) {
      const double err = std::abs(slinv::integrate_ivp(c.q, c.lambda, 1.0, 0.0, 1.0, tol).y_end() - ref[0]);
      // Below ~1e-11 the RK4 reference itself is the error floor.
      CHECK(err <= std::max(prev, 1e-11));
      prev = err;
      tol = {tol.rel / 2, tol.abs_y / 2, tol.abs_dy / 2};
    }
  }
}

TEST_CASE("stop points are hit exactly", "[ode]") {
  const std::vector<double> stops = {0.1234, 0.5, 0.777};
  const auto t = slinv::integrate_ivp(zero, 25.0, 1.0, 0.0, 1.0, {}, stops);
  for (double s : stops) {
    CHECK(std::find(t.x().begin(), t.x().end(), s) != t.x().end());
    CHECK_THAT(t.at(s)[0], WithinAbs(std::sin(5.0 * s) / 5.0, 1e-10));
  }
}

TEST_CASE("dense output is accurate between steps", "[ode]") {
  const auto t = slinv::integrate_ivp(zero, 400.0, 1.0, 0.0, 1.0);
  for (int i = 0; i <= 200; ++i) {
    const double x = i / 200.0;
    const auto v = t.at(x);
    CHECK_THAT(v[0], WithinAbs(std::sin(20.0 * x) / 20.0, 1e-8));
  }
}

TEST_CASE("integration errors", "[ode][errors]") {
  auto nan_q = [](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 0.0; };
  try {
    slinv::integrate_ivp(nan_q, 1.0, 1.0, 0.0, 1.0);
    FAIL("expected IntegrationError");
  } catch (const slinv::IntegrationError& e) {
    CHECK(e.x() > 0.4);
  }
  CHECK_THROWS_AS(slinv::integrate_ivp(zero, 1.0, 0.0, 0.0, 1.0), slinv::InvalidArgument);
  CHECK_THROWS_AS(slinv::integrate_ivp(zero, 1.0, 1.0, 0.0, 1.0, {0.0, 1e-10, 1e-10}),
                  slinv::InvalidArgument);
  auto wild = [](double x) { return 1e40 * std::sin(1e6 * x); };
  CHECK_THROWS_AS(slinv::integrate_ivp(wild, 1.0, 1.0, 0.0, 1.0), slinv::IntegrationError);
}
