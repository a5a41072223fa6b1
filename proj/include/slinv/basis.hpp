#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slinv/ode.hpp"

namespace slinv {

/// One expansion function on [0, 1]. Identity is symbolic (kind + index), so
/// the constant function compares equal whichever family it came from.
class BasisFunction {
 public:
  enum class Kind { Constant, Cos, Sin, Legendre };

  static BasisFunction constant() { return {Kind::Constant, 0}; }
  /// cos(2mπx); m = 0 collapses to the constant.
  static BasisFunction cos(int m);
  /// sin(2mπx), m ≥ 1.
  static BasisFunction sin(int m);
  /// Shifted Legendre polynomial P_d(2x − 1); d = 0 collapses to the constant.
  static BasisFunction legendre(int d);

  Kind kind() const { return kind_; }
  int index() const { return index_; }
  bool is_constant() const { return kind_ == Kind::Constant; }

  double operator()(double x) const;

  /// Exact ‖φ‖ in L²([0, 1]).
  double l2_norm() const;

  /// Human-readable label, e.g. "1", "cos(4πx)", "P2(2x-1)".
  std::string label() const;

  friend bool operator==(const BasisFunction&, const BasisFunction&) = default;

 private:
  BasisFunction(Kind kind, int index) : kind_(kind), index_(index) {}
  Kind kind_;
  int index_;
};

/// P_d(u) by the three-term recurrence.
double legendre_p(int degree, double u);

/// An ordered, linearly independent family of functions with its Gram matrix.
class Basis {
 public:
  enum class Family { CosineEven, TrigFull, Legendre, LegendreEven, Composite };

  /// cos(2(l−1)πx), l = 1..n.
  static Basis cosine_even(int n);
  /// 1, sin 2πx, cos 2πx, sin 4πx, cos 4πx, ... (cos 2(l−1)πx paired with sin 2lπx).
  static Basis trig_full(int n);
  /// P_{l−1}(2x − 1), l = 1..n.
  static Basis legendre(int n);
  /// P_{2(l−1)}(2x − 1), l = 1..n: polynomials even about x = 1/2.
  static Basis legendre_even(int n);
  static Basis composite(std::vector<BasisFunction> functions);

  Family family() const { return family_; }
  int size() const { return static_cast<int>(functions_.size()); }
  const BasisFunction& operator[](int l) const { return functions_[static_cast<std::size_t>(l)]; }
  const std::vector<BasisFunction>& functions() const { return functions_; }
  bool first_is_constant() const { return !functions_.empty() && functions_.front().is_constant(); }

  /// G_{lm} = ∫₀¹ φ_l φ_m.
  const Eigen::MatrixXd& gram() const { return gram_; }
  double gram_min_eigenvalue() const { return gram_min_eig_; }

  /// Row vector (φ_1(x), ..., φ_n(x)).
  Eigen::VectorXd evaluate(double x) const;

 private:
  Basis(Family family, std::vector<BasisFunction> functions);
  Family family_;
  std::vector<BasisFunction> functions_;
  Eigen::MatrixXd gram_;
  double gram_min_eig_ = 0.0;
};

std::string family_name(Basis::Family family);

/// Σ d_l φ_l over a shared, immutable basis.
class Potential {
 public:
  Potential(std::shared_ptr<const Basis> basis, Eigen::VectorXd coefficients);
  explicit Potential(std::shared_ptr<const Basis> basis);

  const Basis& basis() const { return *basis_; }
  std::shared_ptr<const Basis> basis_ptr() const { return basis_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  Eigen::VectorXd& coefficients() { return coefficients_; }

  double operator()(double x) const;
  PotentialFn as_function() const;

 private:
  std::shared_ptr<const Basis> basis_;
  Eigen::VectorXd coefficients_;
};

double eval_potential(const Potential& p, double x);

/// L²-orthogonal projection of f onto span(basis): solves G d = b, b_l = ∫ f φ_l.
Potential project(const PotentialFn& f, std::shared_ptr<const Basis> basis);

/// True L² norm √(dᵀ G d) of the expanded function.
double l2_norm(const Potential& p);

}  // namespace slinv
