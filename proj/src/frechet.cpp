#include "slinv/frechet.hpp"

#include <limits>
#include <sstream>

#include "slinv/error.hpp"
#include "slinv/quadrature.hpp"

namespace slinv {

double kernel_full(const PotentialFn& q, double t, double x, double lambda,
                   const ToleranceTriple& tol) {
  if (!(0.0 <= t && x > 0.0 && x <= 1.0))
    throw InvalidArgument("kernel_full: need t >= 0 and x in (0, 1]");
  if (t == 0.0 || t >= x) return 0.0;
  const FundamentalPair at_t = fundamental_pair(q, lambda, t, tol);
  const FundamentalPair at_x = fundamental_pair(q, lambda, x, tol);
  return at_t.y2 * (at_t.y1 * at_x.y2 - at_x.y1 * at_t.y2);
}

int kernel_panels(double lambda) {
  return std::max(8, 8 * static_cast<int>(std::ceil(std::sqrt(std::abs(lambda)))));
}

double frechet_apply(const PotentialFn& q, const PotentialFn& v, double x, double lambda,
                     bool use_full, const ToleranceTriple& tol) {
  if (!(x > 0.0 && x <= 1.0)) throw InvalidArgument("frechet_apply: x must lie in (0, 1]");
  QuadratureOptions qo;
  qo.initial_panels = kernel_panels(lambda);
  if (!use_full) {
    return integrate([&](double t) { return kernel_quasi(t, x, lambda) * v(t); }, 0.0, x, qo);
  }
  const Trajectory y1 = integrate_ivp(q, lambda, x, 1.0, 0.0, tol);
  const Trajectory y2 = integrate_ivp(q, lambda, x, 0.0, 1.0, tol);
  const double y1x = y1.y_end();
  const double y2x = y2.y_end();
  return integrate(
      [&](double t) {
        const double a = y1.at(t)[0];
        const double b = y2.at(t)[0];
        return b * (a * y2x - y1x * b) * v(t);
      },
      0.0, x, qo);
}

double JacobianMatrix::condition_number() const {
  const double smax = singular_values(0);
  const double smin = singular_values(singular_values.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

JacobianMatrix assemble_jacobian(std::span<const double> points, std::span<const double> lambdas,
                                 const Basis& basis) {
  const int n = basis.size();
  if (static_cast<int>(points.size()) != n || static_cast<int>(lambdas.size()) != n)
    throw InvalidArgument("assemble_jacobian: need one point and one eigenvalue per basis function");
  JacobianMatrix jac;
  jac.points.assign(points.begin(), points.end());
  jac.lambdas.assign(lambdas.begin(), lambdas.end());
  jac.matrix.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const double x = points[static_cast<std::size_t>(j)];
    const double lam = lambdas[static_cast<std::size_t>(j)];
    QuadratureOptions qo;
    qo.initial_panels = kernel_panels(lam);
    for (int l = 0; l < n; ++l) {
      try {
        jac.matrix(j, l) = integrate(
            [&](double t) { return kernel_quasi(t, x, lam) * basis[l](t); }, 0.0, x, qo);
      } catch (const QuadratureError& e) {
        std::ostringstream os;
        os << "Jacobian entry (" << j << ", " << l << "): " << e.what();
        throw QuadratureError(os.str());
      }
    }
  }
  jac.singular_values = Eigen::JacobiSVD<Eigen::MatrixXd>(jac.matrix).singularValues();
  return jac;
}

TruncatedPinv truncated_pinv(const Eigen::MatrixXd& j, double cutoff) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD failed");
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::VectorXd s_inv = Eigen::VectorXd::Zero(s.size());
  int dropped = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (std::abs(s(i)) < cutoff)
      ++dropped;
    else
      s_inv(i) = 1.0 / s(i);
  }
  const auto& u = svd.matrixU();
  const auto& v = svd.matrixV();
  TruncatedPinv out;
  out.pinv = v.leftCols(s.size()) * s_inv.asDiagonal() * u.leftCols(s.size()).transpose();
  out.singular_values = s;
  out.dropped = dropped;
  return out;
}

Eigen::VectorXd truncated_pinv_solve(const Eigen::MatrixXd& j, const Eigen::VectorXd& r,
                                     double cutoff, int* dropped) {
  if (r.size() != j.rows()) throw InvalidArgument("truncated_pinv_solve: residual length mismatch");
  const TruncatedPinv p = truncated_pinv(j, cutoff);
  if (dropped) *dropped = p.dropped;
  return p.pinv * r;
}

}  // namespace slinv
