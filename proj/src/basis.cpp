#include "slinv/basis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "slinv/error.hpp"
#include "slinv/quadrature.hpp"

namespace slinv {

using std::numbers::pi;

double legendre_p(int degree, double u) {
  if (degree == 0) return 1.0;
  double p_prev = 1.0;
  double p = u;
  for (int k = 1; k < degree; ++k) {
    const double p_next = ((2.0 * k + 1.0) * u * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = p_next;
  }
  return p;
}

BasisFunction BasisFunction::cos(int m) {
  if (m < 0) throw InvalidArgument("cos basis function needs m >= 0");
  return m == 0 ? constant() : BasisFunction(Kind::Cos, m);
}

BasisFunction BasisFunction::sin(int m) {
  if (m < 1) throw InvalidArgument("sin basis function needs m >= 1");
  return {Kind::Sin, m};
}

BasisFunction BasisFunction::legendre(int d) {
  if (d < 0) throw InvalidArgument("legendre basis function needs degree >= 0");
  return d == 0 ? constant() : BasisFunction(Kind::Legendre, d);
}

double BasisFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::Constant: return 1.0;
    case Kind::Cos: return std::cos(2.0 * index_ * pi * x);
    case Kind::Sin: return std::sin(2.0 * index_ * pi * x);
    case Kind::Legendre: return legendre_p(index_, 2.0 * x - 1.0);
  }
  return 0.0;
}

double BasisFunction::l2_norm() const {
  switch (kind_) {
    case Kind::Constant: return 1.0;
    case Kind::Cos:
    case Kind::Sin: return std::sqrt(0.5);
    case Kind::Legendre: return 1.0 / std::sqrt(2.0 * index_ + 1.0);
  }
  return 0.0;
}

std::string BasisFunction::label() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant: os << "1"; break;
    case Kind::Cos: os << "cos(" << 2 * index_ << "pi x)"; break;
    case Kind::Sin: os << "sin(" << 2 * index_ << "pi x)"; break;
    case Kind::Legendre: os << "P" << index_ << "(2x-1)"; break;
  }
  return os.str();
}

namespace {

int oscillation_panels(const std::vector<BasisFunction>& fs) {
  int top = 0;
  for (const auto& f : fs)
    if (f.kind() == BasisFunction::Kind::Cos || f.kind() == BasisFunction::Kind::Sin ||
        f.kind() == BasisFunction::Kind::Legendre)
      top = std::max(top, f.index());
  return 8 + 4 * top;
}

}  // namespace

Basis::Basis(Family family, std::vector<BasisFunction> functions)
    : family_(family), functions_(std::move(functions)) {
  const int n = size();
  if (n < 1) throw InvalidArgument("basis must contain at least one function");
  QuadratureOptions qo;
  qo.initial_panels = 2 * oscillation_panels(functions_);
  gram_.resize(n, n);
  for (int l = 0; l < n; ++l) {
    for (int m = l; m < n; ++m) {
      const auto& fl = functions_[static_cast<std::size_t>(l)];
      const auto& fm = functions_[static_cast<std::size_t>(m)];
      gram_(l, m) = gram_(m, l) = integrate([&](double x) { return fl(x) * fm(x); }, 0.0, 1.0, qo);
    }
  }
  gram_min_eig_ = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram_, Eigen::EigenvaluesOnly)
                      .eigenvalues()
                      .minCoeff();
  if (!(gram_min_eig_ > 1e-12)) {
    std::ostringstream os;
    os << "basis functions are not linearly independent: smallest Gram eigenvalue "
       << gram_min_eig_;
    throw InvalidArgument(os.str());
  }
}

Basis Basis::cosine_even(int n) {
  std::vector<BasisFunction> fs;
  for (int l = 0; l < n; ++l) fs.push_back(BasisFunction::cos(l));
  return {Family::CosineEven, std::move(fs)};
}

Basis Basis::trig_full(int n) {
  std::vector<BasisFunction> fs;
  for (int p = 0; p < n; ++p) {
    if (p == 0)
      fs.push_back(BasisFunction::constant());
    else if (p % 2 == 1)
      fs.push_back(BasisFunction::sin((p + 1) / 2));
    else
      fs.push_back(BasisFunction::cos(p / 2));
  }
  return {Family::TrigFull, std::move(fs)};
}

Basis Basis::legendre(int n) {
  std::vector<BasisFunction> fs;
  for (int l = 0; l < n; ++l) fs.push_back(BasisFunction::legendre(l));
  return {Family::Legendre, std::move(fs)};
}

Basis Basis::legendre_even(int n) {
  std::vector<BasisFunction> fs;
  for (int l = 0; l < n; ++l) fs.push_back(BasisFunction::legendre(2 * l));
  return {Family::LegendreEven, std::move(fs)};
}

Basis Basis::composite(std::vector<BasisFunction> functions) {
  for (std::size_t i = 0; i < functions.size(); ++i)
    for (std::size_t j = i + 1; j < functions.size(); ++j)
      if (functions[i] == functions[j])
        throw InvalidArgument("composite basis repeats " + functions[i].label());
  return {Family::Composite, std::move(functions)};
}

Eigen::VectorXd Basis::evaluate(double x) const {
  Eigen::VectorXd v(size());
  for (int l = 0; l < size(); ++l) v(l) = (*this)[l](x);
  return v;
}

std::string family_name(Basis::Family family) {
  switch (family) {
    case Basis::Family::CosineEven: return "cosine-even";
    case Basis::Family::TrigFull: return "trig-full";
    case Basis::Family::Legendre: return "legendre";
    case Basis::Family::LegendreEven: return "legendre-even";
    case Basis::Family::Composite: return "composite";
  }
  return "unknown";
}

Potential::Potential(std::shared_ptr<const Basis> basis, Eigen::VectorXd coefficients)
    : basis_(std::move(basis)), coefficients_(std::move(coefficients)) {
  if (!basis_) throw InvalidArgument("potential needs a basis");
  if (coefficients_.size() != basis_->size())
    throw InvalidArgument("coefficient count does not match basis size");
}

Potential::Potential(std::shared_ptr<const Basis> basis)
    : Potential(basis, Eigen::VectorXd::Zero(basis ? basis->size() : 0)) {}

double Potential::operator()(double x) const {
  double sum = 0.0;
  for (int l = 0; l < basis_->size(); ++l) sum += coefficients_(l) * (*basis_)[l](x);
  return sum;
}

PotentialFn Potential::as_function() const {
  return [p = *this](double x) { return p(x); };
}

double eval_potential(const Potential& p, double x) { return p(x); }

Potential project(const PotentialFn& f, std::shared_ptr<const Basis> basis) {
  const Basis& b = *basis;
  QuadratureOptions qo;
  qo.initial_panels = 2 * oscillation_panels(b.functions());
  Eigen::VectorXd rhs(b.size());
  for (int l = 0; l < b.size(); ++l)
    rhs(l) = integrate([&](double x) { return f(x) * b[l](x); }, 0.0, 1.0, qo);
  Eigen::VectorXd d = b.gram().ldlt().solve(rhs);
  return {std::move(basis), std::move(d)};
}

double l2_norm(const Potential& p) {
  const auto& d = p.coefficients();
  return std::sqrt(std::max(0.0, d.dot(p.basis().gram() * d)));
}

}  // namespace slinv
