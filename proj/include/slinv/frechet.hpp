#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "slinv/basis.hpp"
#include "slinv/ode.hpp"

namespace slinv {

/// s_λ(x) = sin(√λ x)/√λ, continued as an entire function of λ:
/// x at λ = 0 and sinh(√−λ x)/√−λ for λ < 0.
template <typename Scalar>
Scalar s_lambda(Scalar lambda, Scalar x) {
  using std::abs, std::sin, std::sinh, std::sqrt;
  // Near λ = 0 the Taylor series x − λx³/6 + λ²x⁵/120 avoids 0/0.
  if (abs(lambda * x * x) < Scalar(1e-6)) {
    const Scalar z = lambda * x * x;
    return x * (Scalar(1) - z / Scalar(6) + z * z / Scalar(120));
  }
  if (lambda > Scalar(0)) {
    const Scalar w = sqrt(lambda);
    return sin(w * x) / w;
  }
  const Scalar w = sqrt(-lambda);
  return sinh(w * x) / w;
}

/// Quasi-Newton kernel K₀(t, x) = s_λ(t) s_λ(x − t), the Fréchet kernel at q = 0.
template <typename Scalar>
Scalar kernel_quasi(Scalar t, Scalar x, Scalar lambda) {
  return s_lambda(lambda, t) * s_lambda(lambda, x - t);
}

/// Full kernel K(t, x, λ, q) = y₂(t)(y₁(t)y₂(x) − y₁(x)y₂(t)) on 0 ≤ t ≤ x, 0 beyond.
double kernel_full(const PotentialFn& q, double t, double x, double lambda,
                   const ToleranceTriple& tol = {});

/// ∫₀ˣ K(t, x, λ, q) v(t) dt with the full kernel or the frozen K₀.
/// The full kernel is evaluated from the dense output of one y₁ and one y₂ solve.
double frechet_apply(const PotentialFn& q, const PotentialFn& v, double x, double lambda,
                     bool use_full, const ToleranceTriple& tol = {});

/// Quadrature settings for oscillatory kernel integrals: absolute 1e-10 with at
/// least 8·⌈√|λ|⌉ starting panels.
int kernel_panels(double lambda);

/// Sampling Jacobian J_{jl} = ∫₀^{x_j} s_λj(t) s_λj(x_j − t) φ_l(t) dt.
struct JacobianMatrix {
  Eigen::MatrixXd matrix;
  std::vector<double> points;
  std::vector<double> lambdas;
  Eigen::VectorXd singular_values;  // descending

  /// σ_max/σ_min; +∞ when σ_min = 0.
  double condition_number() const;
};

JacobianMatrix assemble_jacobian(std::span<const double> points, std::span<const double> lambdas,
                                 const Basis& basis);

/// Moore–Penrose pseudoinverse with singular values below `cutoff` zeroed.
struct TruncatedPinv {
  Eigen::MatrixXd pinv;
  Eigen::VectorXd singular_values;
  int dropped = 0;
  int rank() const { return static_cast<int>(singular_values.size()) - dropped; }
};

TruncatedPinv truncated_pinv(const Eigen::MatrixXd& j, double cutoff = 1e-6);

/// δ = J⁺ r with the truncated pseudoinverse; `dropped` receives the count of
/// discarded singular values when non-null.
Eigen::VectorXd truncated_pinv_solve(const Eigen::MatrixXd& j, const Eigen::VectorXd& r,
                                     double cutoff = 1e-6, int* dropped = nullptr);

}  // namespace slinv
