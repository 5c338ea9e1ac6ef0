#include "sparse_ar/innovations.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sparse_ar/error.hpp"

namespace sparse_ar {
namespace {

void require_finite(double z) {
  if (!std::isfinite(z)) throw InvalidInput("innovation density evaluated at a non-finite point");
}

}  // namespace

InnovationFamily::InnovationFamily(InnovationKind kind, double param) : kind_(kind), param_(param) {
  if (kind == InnovationKind::kGaussian) {
    log_norm_ = -0.5 * std::log(2.0 * std::numbers::pi) - std::log(param);
  } else {
    log_norm_ = std::lgamma(0.5 * (param + 1.0)) - std::lgamma(0.5 * param) -
                0.5 * std::log(param * std::numbers::pi);
  }
}

InnovationFamily InnovationFamily::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("gaussian sigma must be positive and finite");
  return InnovationFamily(InnovationKind::kGaussian, sigma);
}

InnovationFamily InnovationFamily::student_t(double df) {
  if (!(df > 0.0) || !std::isfinite(df)) throw InvalidInput("student_t df must be positive and finite");
  return InnovationFamily(InnovationKind::kStudentT, df);
}

double InnovationFamily::sigma() const {
  if (kind_ != InnovationKind::kGaussian) throw InvalidInput("sigma requested from a non-gaussian family");
  return param_;
}

double InnovationFamily::df() const {
  if (kind_ != InnovationKind::kStudentT) throw InvalidInput("df requested from a non-student_t family");
  return param_;
}

std::string InnovationFamily::name() const {
  return kind_ == InnovationKind::kGaussian ? "gaussian" : "student_t";
}

double InnovationFamily::variance() const noexcept {
  if (kind_ == InnovationKind::kGaussian) return param_ * param_;
  if (param_ > 2.0) return param_ / (param_ - 2.0);
  return std::numeric_limits<double>::infinity();
}

bool InnovationFamily::has_finite_variance() const noexcept { return std::isfinite(variance()); }

bool InnovationFamily::satisfies_assumptions_2() const noexcept {
  return kind_ == InnovationKind::kGaussian || param_ > 4.0;
}

double InnovationFamily::log_density(double z) const {
  require_finite(z);
  if (kind_ == InnovationKind::kGaussian) {
    const double u = z / param_;
    return log_norm_ - 0.5 * u * u;
  }
  return log_norm_ - 0.5 * (param_ + 1.0) * std::log1p(z * z / param_);
}

double InnovationFamily::score(double z) const {
  if (kind_ == InnovationKind::kGaussian) return -z / (param_ * param_);
  return -(param_ + 1.0) * z / (param_ + z * z);
}

double InnovationFamily::score_derivative(double z) const {
  if (kind_ == InnovationKind::kGaussian) return -1.0 / (param_ * param_);
  const double denom = param_ + z * z;
  return -(param_ + 1.0) * (param_ - z * z) / (denom * denom);
}

double InnovationFamily::information_constant() const {
  if (kind_ == InnovationKind::kGaussian) return 1.0 / (param_ * param_);
  return integrate_real_line([this](double z) {
    const double s = score(z);
    return s * s * std::exp(log_density(z));
  });
}

std::vector<double> InnovationFamily::sample(std::size_t n, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  if (kind_ == InnovationKind::kGaussian) {
    std::normal_distribution<double> dist(0.0, param_);
    for (auto& v : out) v = dist(rng);
  } else {
    std::student_t_distribution<double> dist(param_);
    for (auto& v : out) v = dist(rng);
  }
  return out;
}

double integrate_real_line(const std::function<double(double)>& f, double abs_tol) {
  using boost::math::quadrature::gauss_kronrod;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double error = 0.0;
  // Split at the origin so each half maps onto a finite interval.
  const double left = gauss_kronrod<double, 61>::integrate(f, -kInf, 0.0, 20, abs_tol * 1e-2, &error);
  const double right = gauss_kronrod<double, 61>::integrate(f, 0.0, kInf, 20, abs_tol * 1e-2, &error);
  return left + right;
}

}  // namespace sparse_ar
