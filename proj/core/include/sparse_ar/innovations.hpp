#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sparse_ar {

enum class InnovationKind { kGaussian, kStudentT };

/// Innovation density g of the AR recursion.
///
/// Gaussian families are N(0, sigma^2). Student-t families are the raw
/// (unstandardized) t(df) law, so their variance is df / (df - 2) rather
/// than 1. Both have full support, hence log g is finite everywhere.
class InnovationFamily {
 public:
  static InnovationFamily gaussian(double sigma = 1.0);
  static InnovationFamily student_t(double df);

  InnovationKind kind() const noexcept { return kind_; }
  /// sigma for Gaussian, df for Student-t.
  double parameter() const noexcept { return param_; }
  double sigma() const;
  double df() const;

  std::string name() const;

  /// Var(Z); +inf when df <= 2.
  double variance() const noexcept;
  bool has_finite_variance() const noexcept;
  /// Finite fourth moment plus the integrability conditions on g'/g and
  /// g''/g. Gaussian always; Student-t iff df > 4.
  bool satisfies_assumptions_2() const noexcept;

  double log_density(double z) const;
  /// g'(z) / g(z).
  double score(double z) const;
  /// (g'/g)'(z), the second derivative of log g.
  double score_derivative(double z) const;

  /// C(g) = E[(g'(Z)/g(Z))^2]. Closed form for Gaussian, quadrature otherwise.
  double information_constant() const;

  /// n i.i.d. draws, reproducible per seed.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

  friend bool operator==(const InnovationFamily&, const InnovationFamily&) = default;

 private:
  InnovationFamily(InnovationKind kind, double param);

  InnovationKind kind_;
  double param_;
  double log_norm_;
};

/// Integral of f over the real line (adaptive Gauss-Kronrod on a mapped
/// interval). Exposed so callers can check normalization and moments.
double integrate_real_line(const std::function<double(double)>& f, double abs_tol = 1e-10);

}  // namespace sparse_ar
