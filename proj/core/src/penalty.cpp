#include "sparse_ar/penalty.hpp"

#include <algorithm>
#include <cmath>

#include "sparse_ar/error.hpp"

namespace sparse_ar {
namespace {

void require_nonnegative(double x) {
  if (!(x >= 0.0)) throw InvalidInput("penalty derivatives are defined on |phi| >= 0");
}

}  // namespace

PenaltySpec::PenaltySpec(PenaltyKind kind, double lambda, double a) : kind_(kind), lambda_(lambda), a_(a) {}

PenaltySpec PenaltySpec::scad(double lambda, double a) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("penalty lambda must be finite and >= 0");
  if (!(a > 2.0) || !std::isfinite(a)) throw InvalidInput("SCAD requires a > 2");
  return PenaltySpec(PenaltyKind::kScad, lambda, a);
}

PenaltySpec PenaltySpec::lasso(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("penalty lambda must be finite and >= 0");
  return PenaltySpec(PenaltyKind::kLasso, lambda, 0.0);
}

std::string PenaltySpec::name() const { return kind_ == PenaltyKind::kScad ? "scad" : "lasso"; }

double PenaltySpec::value(double phi) const {
  const double x = std::abs(phi);
  if (kind_ == PenaltyKind::kLasso) return lambda_ * x;
  if (x <= lambda_) return lambda_ * x;
  if (x < a_ * lambda_) {
    return a_ * lambda_ * x / (a_ - 1.0) - x * x / (2.0 * (a_ - 1.0)) - lambda_ * lambda_ / (2.0 * (a_ - 1.0));
  }
  return (a_ + 1.0) * lambda_ * lambda_ / 2.0;
}

double PenaltySpec::derivative(double x) const {
  require_nonnegative(x);
  if (kind_ == PenaltyKind::kLasso || x <= lambda_) return lambda_;
  return std::max(a_ * lambda_ - x, 0.0) / (a_ - 1.0);
}

double PenaltySpec::second_derivative(double x) const {
  require_nonnegative(x);
  if (kind_ == PenaltyKind::kLasso) return 0.0;
  return (x > lambda_ && x < a_ * lambda_) ? -1.0 / (a_ - 1.0) : 0.0;
}

double PenaltySpec::total(const Eigen::VectorXd& coefficients) const {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < coefficients.size(); ++j) acc += value(coefficients(j));
  return acc;
}

double max_derivative_on_support(const PenaltySpec& pen, const Eigen::VectorXd& true_coefficients) {
  double out = 0.0;
  for (Eigen::Index j = 0; j < true_coefficients.size(); ++j) {
    if (true_coefficients(j) != 0.0) out = std::max(out, std::abs(pen.derivative(std::abs(true_coefficients(j)))));
  }
  return out;
}

bool in_unbiased_region(const PenaltySpec& pen, const Eigen::VectorXd& true_coefficients) {
  if (pen.kind() != PenaltyKind::kScad) return false;
  for (Eigen::Index j = 0; j < true_coefficients.size(); ++j) {
    const double x = std::abs(true_coefficients(j));
    if (x != 0.0 && x < pen.a() * pen.lambda()) return false;
  }
  return true;
}

}  // namespace sparse_ar
