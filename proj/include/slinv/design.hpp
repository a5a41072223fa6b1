#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slinv/basis.hpp"

namespace slinv {

/// Minimum spacing between sample points (and from x = 0).
inline constexpr double kMinPointGap = 1e-3;

struct PointConfiguration {
  std::vector<double> points;
  int mode = 1;
  double condition_number = 0.0;
};

/// Condition number of the sampling Jacobian at λ_j ≡ (kπ)². Inputs are sorted
/// first; +∞ when the Jacobian is singular. Throws InvalidArgument for points
/// outside (0, 1], duplicates, or gaps below kMinPointGap.
double condition_number(std::span<const double> points, int k, const Basis& basis);

/// i/(n+1), i = 1..n.
std::vector<double> equally_spaced(int n);

struct DesignOptions {
  int budget = 2000;  // objective evaluations, baseline included
  std::uint64_t seed = 1;
};

/// Multi-start Nelder–Mead over ordered configurations 0 < x₁ < … < xₙ ≤ 1.
/// Points are parameterized by softmax gap weights, so every trial respects
/// the minimum gap. The equally spaced baseline is evaluated first and kept as
/// the incumbent. For n = 1 every admissible point gives C = 1; the point with
/// the largest |J₁₁| on a fine grid is returned instead.
PointConfiguration optimize_points(int k, const Basis& basis, const DesignOptions& opts = {});

}  // namespace slinv
