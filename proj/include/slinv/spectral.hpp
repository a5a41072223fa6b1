#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "slinv/ode.hpp"

namespace slinv {

/// Indexed Dirichlet eigenvalue with its shooting diagnostics.
struct EigenPair {
  int mode = 0;
  double lambda = 0.0;
  double boundary_residual = 0.0;  // |y2(1, λ_k, q)|
  int zero_count = 0;              // sign changes of y2 on (0, 1)
  double asymptotic_residual = 0.0;  // λ_k − (kπ)² − ∫q
};

struct SampleRow {
  double x = 0.0;
  double lambda = 0.0;
  double y = 0.0;  // y2(x, λ, q): unit initial slope
  int mode = 1;
};

struct NoiseSpec {
  double sigma = 0.0;  // relative amplitude
  std::uint64_t seed = 0;
};

struct SampleSet {
  std::vector<SampleRow> rows;
  std::optional<NoiseSpec> noise;

  int size() const { return static_cast<int>(rows.size()); }
  /// Lowest mode present.
  int mode() const;
  std::vector<double> points() const;

  /// Throws InvalidArgument unless every x is in (0, 1], every λ finite, and
  /// x is strictly increasing within each mode.
  void validate() const;
};

struct EigenOptions {
  double tol = 1e-10;  // bound on |y2(1, λ)| at the returned eigenvalue
  ToleranceTriple ivp{};
};

/// Mean value ∫₀¹ q by adaptive quadrature at 1e-10.
double mean_value(const PotentialFn& q);

/// y2(1, λ, q); its roots in λ are the Dirichlet eigenvalues.
double boundary_shot(const PotentialFn& q, double lambda, const ToleranceTriple& tol = {});

/// Number of sign changes of y2(·, λ, q) on (0, 1], i.e. the count of
/// Dirichlet eigenvalues ≤ λ (Sturm oscillation).
int oscillation_count(const PotentialFn& q, double lambda, const ToleranceTriple& tol = {});

/// k-th Dirichlet eigenvalue by count-guided bracketing from the asymptote
/// (kπ)² + ∫q, bisection, and Illinois polishing on the boundary shot. The
/// result is certified by k−1 interior zeros of y2.
EigenPair eigenvalue(const PotentialFn& q, int k, const EigenOptions& opts = {});

/// Samples the unit-slope mode-k eigenfunction at strictly increasing points
/// in (0, 1]. Optional multiplicative noise Y ← Y(1 + σε), ε ~ N(0, 1).
SampleSet sample_eigenfunction(const PotentialFn& q, int k, std::span<const double> points,
                               std::optional<NoiseSpec> noise = std::nullopt,
                               const EigenOptions& opts = {});

double asymptotic_residual(const PotentialFn& q, int k, const EigenOptions& opts = {});

/// Sign changes of y over the trajectory's step ends and a uniform dense grid
/// of `grid` points, restricted to x < x_max.
int count_sign_changes(const Trajectory& traj, int grid, double x_max);

}  // namespace slinv
