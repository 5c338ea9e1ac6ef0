#pragma once

#include <string>

#include <Eigen/Dense>

namespace sparse_ar {

enum class PenaltyKind { kScad, kLasso };

/// Second SCAD tuning parameter used unless the caller picks another.
inline constexpr double kDefaultScadA = 2.1;

/// Coordinate-wise penalty p_lambda(|phi|).
///
/// SCAD is linear on [0, lambda], a concave quadratic on (lambda, a*lambda)
/// and constant (a+1)lambda^2/2 beyond. LASSO is lambda*|phi|.
///
/// Knot conventions: derivative() takes the left branch at |phi| = lambda and
/// |phi| = a*lambda (both branches agree there anyway), and
/// second_derivative() is 0 at both knots.
class PenaltySpec {
 public:
  static PenaltySpec scad(double lambda, double a = kDefaultScadA);
  static PenaltySpec lasso(double lambda);

  PenaltyKind kind() const noexcept { return kind_; }
  double lambda() const noexcept { return lambda_; }
  /// Meaningful for SCAD only.
  double a() const noexcept { return a_; }
  std::string name() const;

  double value(double phi) const;
  /// p'_lambda(x), x >= 0.
  double derivative(double x) const;
  /// p''_lambda(x), x >= 0.
  double second_derivative(double x) const;

  /// Sum of value() over a coefficient vector.
  double total(const Eigen::VectorXd& coefficients) const;

  friend bool operator==(const PenaltySpec&, const PenaltySpec&) = default;

 private:
  PenaltySpec(PenaltyKind kind, double lambda, double a);

  PenaltyKind kind_;
  double lambda_;
  double a_;
};

/// a_N = max{ p'_lambda(|phi|) : phi a nonzero true coefficient }; 0 when all
/// coefficients are zero.
double max_derivative_on_support(const PenaltySpec& pen, const Eigen::VectorXd& true_coefficients);

/// True when every nonzero coefficient sits in the flat SCAD region
/// (|phi| >= a*lambda), i.e. when a_N vanishes for SCAD.
bool in_unbiased_region(const PenaltySpec& pen, const Eigen::VectorXd& true_coefficients);

}  // namespace sparse_ar
