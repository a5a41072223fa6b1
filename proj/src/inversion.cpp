#include "slinv/inversion.hpp"

#include <cmath>
#include <numbers>

#include "slinv/error.hpp"
#include "slinv/frechet.hpp"

namespace slinv {

using std::numbers::pi;

void InversionOptions::validate() const {
  if (max_iterations < 1) throw InvalidArgument("max iterations must be >= 1");
  if (!(tolerance > 0.0) || !(svd_cutoff > 0.0))
    throw InvalidArgument("inversion tolerances must be positive");
  if (!(ivp.rel > 0.0 && ivp.abs_y > 0.0 && ivp.abs_dy > 0.0))
    throw InvalidArgument("IVP tolerances must be positive");
}

namespace {

double forward_y2(const PotentialFn& q, double lambda, double x, const ToleranceTriple& tol) {
  return integrate_ivp(q, lambda, x, 0.0, 1.0, tol).y_end();
}

}  // namespace

Eigen::VectorXd residuals(const SampleSet& samples, const Potential& p,
                          const ToleranceTriple& tol) {
  const PotentialFn q = p.as_function();
  Eigen::VectorXd r(samples.size());
  for (int j = 0; j < samples.size(); ++j) {
    const auto& row = samples.rows[static_cast<std::size_t>(j)];
    r(j) = row.y - forward_y2(q, row.lambda, row.x, tol);
  }
  return r;
}

InversionReport invert(const SampleSet& samples, std::shared_ptr<const Basis> basis,
                       const InversionOptions& opts) {
  opts.validate();
  samples.validate();
  if (!basis) throw InvalidArgument("invert: no basis");
  const int n = basis->size();
  if (samples.size() != n)
    throw InvalidArgument("invert: need exactly one sample per basis function (" +
                          std::to_string(samples.size()) + " samples, " + std::to_string(n) +
                          " functions)");
  if (!basis->first_is_constant())
    throw InvalidArgument("invert: the first basis function must be the constant");

  const int k = samples.mode();
  double lambda_mode = 0.0;
  for (const auto& r : samples.rows)
    if (r.mode == k) {
      lambda_mode = r.lambda;
      break;
    }
  const double qbar = lambda_mode - (k * pi) * (k * pi);

  std::vector<double> points, shifted;
  for (const auto& r : samples.rows) {
    points.push_back(r.x);
    shifted.push_back(r.lambda - qbar);
  }
  const JacobianMatrix jac = assemble_jacobian(points, shifted, *basis);
  const TruncatedPinv pinv = truncated_pinv(jac.matrix, opts.svd_cutoff);
  if (pinv.rank() == 0)
    throw InversionError("every Jacobian singular value is below the cutoff");

  InversionReport report{Potential(basis)};
  report.qbar_est = qbar;
  report.singular_values = pinv.singular_values;
  report.dropped_singular_values = pinv.dropped;

  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd rhs(n);
  double max_delta = std::numeric_limits<double>::infinity();
  while (report.iterations < opts.max_iterations && max_delta > opts.tolerance) {
    const int iteration = report.iterations + 1;
    const PotentialFn q = Potential(basis, d).as_function();
    try {
      for (int j = 0; j < n; ++j) {
        const auto& row = samples.rows[static_cast<std::size_t>(j)];
        rhs(j) = row.y - forward_y2(q, shifted[static_cast<std::size_t>(j)], row.x, opts.ivp);
      }
    } catch (const NumericalError& e) {
      throw InversionError("forward solve failed in iteration " + std::to_string(iteration) +
                           ": " + e.what());
    }
    const Eigen::VectorXd delta = pinv.pinv * rhs;
    d += delta;
    max_delta = delta.cwiseAbs().maxCoeff();
    if (!std::isfinite(max_delta))
      throw InversionError("non-finite update in iteration " + std::to_string(iteration));
    report.max_delta.push_back(max_delta);
    report.iterations = iteration;
  }
  report.converged = max_delta <= opts.tolerance;

  d(0) += qbar;
  report.recovered = Potential(basis, d);
  report.sample_residuals = residuals(samples, report.recovered, opts.ivp);
  return report;
}

}  // namespace slinv
