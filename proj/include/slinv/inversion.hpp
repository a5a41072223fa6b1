#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "slinv/basis.hpp"
#include "slinv/ode.hpp"
#include "slinv/spectral.hpp"

namespace slinv {

struct InversionOptions {
  int max_iterations = 10;
  double tolerance = 1e-4;  // on max|δ_l|
  double svd_cutoff = 1e-6;
  ToleranceTriple ivp{};

  void validate() const;
};

struct InversionReport {
  Potential recovered;
  int iterations = 0;
  std::vector<double> max_delta{};  // one entry per iteration
  Eigen::VectorXd sample_residuals{};  // Y_j − y2(x_j, λ_j, q_rec)
  double qbar_est = 0.0;
  Eigen::VectorXd singular_values{};
  int dropped_singular_values = 0;
  bool converged = false;

  double residual_norm() const { return sample_residuals.norm(); }
};

/// Quasi-Newton reconstruction with the Jacobian frozen at q = 0.
///
/// The mean is estimated as qbar = λ_k − (kπ)² from the lowest sampled mode k
/// and removed from every λ_j. Starting from d = 0 the loop solves
/// J δ = Y − y2(x, λ − qbar, Σ d_l φ_l) with the truncated pseudoinverse until
/// max|δ| ≤ tolerance or the iteration cap; qbar is then added back to the
/// constant coefficient. Non-convergence is reported, not thrown.
///
/// Requires one sample per basis function and φ₁ ≡ 1. Throws InversionError if
/// every singular value falls below the cutoff or a forward solve fails.
InversionReport invert(const SampleSet& samples, std::shared_ptr<const Basis> basis,
                       const InversionOptions& opts = {});

/// r_j = Y_j − y2(x_j, λ_j, p) with the stored (unshifted) eigenvalues.
Eigen::VectorXd residuals(const SampleSet& samples, const Potential& p,
                          const ToleranceTriple& tol = {});

}  // namespace slinv
