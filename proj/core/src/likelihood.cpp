#include "sparse_ar/likelihood.hpp"

#include <cmath>
#include <string>

#include "sparse_ar/error.hpp"
#include "sparse_ar/summation.hpp"

namespace sparse_ar {

ConditionalLikelihood::ConditionalLikelihood(TimeSeries series, std::size_t order, InnovationFamily innovation)
    : ConditionalLikelihood(std::move(series), order, innovation, order + 1) {}

ConditionalLikelihood::ConditionalLikelihood(TimeSeries series, std::size_t order, InnovationFamily innovation,
                                             std::size_t first_term)
    : series_(std::move(series)), order_(order), innovation_(innovation), first_term_(first_term) {
  if (order_ < 1) throw InvalidInput("AR order must be at least 1");
  if (series_.size() <= order_) throw InvalidInput("conditional likelihood needs N > p");
  if (first_term_ <= order_ || first_term_ > series_.size()) {
    throw InvalidInput("first likelihood term must lie in (p, N]");
  }
}

void ConditionalLikelihood::require_dimension(const Eigen::VectorXd& theta) const {
  if (static_cast<std::size_t>(theta.size()) != order_) {
    throw InvalidInput("coefficient vector has length " + std::to_string(theta.size()) + ", expected " +
                       std::to_string(order_));
  }
  if (!theta.allFinite()) throw InvalidInput("coefficient vector contains non-finite entries");
}

Eigen::VectorXd ConditionalLikelihood::residuals(const Eigen::VectorXd& theta) const {
  require_dimension(theta);
  Eigen::VectorXd r(static_cast<Eigen::Index>(term_count()));
  const std::size_t n = series_.size();
  for (std::size_t t = first_term_; t <= n; ++t) {
    double acc = series_[t - 1];
    for (std::size_t j = 1; j <= order_; ++j) acc -= theta(static_cast<Eigen::Index>(j - 1)) * lag(t, j);
    r(static_cast<Eigen::Index>(t - first_term_)) = acc;
  }
  return r;
}

double ConditionalLikelihood::log_lik(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd r = residuals(theta);
  CompensatedSum sum;
  for (Eigen::Index i = 0; i < r.size(); ++i) sum += innovation_.log_density(r(i));
  const double out = sum.value();
  if (!std::isfinite(out)) throw InvalidInput("conditional log-likelihood is not finite");
  return out;
}

Eigen::VectorXd ConditionalLikelihood::gradient(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd r = residuals(theta);
  std::vector<CompensatedSum> sums(order_);
  for (std::size_t t = first_term_; t <= series_.size(); ++t) {
    const double s = innovation_.score(r(static_cast<Eigen::Index>(t - first_term_)));
    for (std::size_t j = 1; j <= order_; ++j) sums[j - 1] += -s * lag(t, j);
  }
  Eigen::VectorXd g(static_cast<Eigen::Index>(order_));
  for (std::size_t j = 0; j < order_; ++j) g(static_cast<Eigen::Index>(j)) = sums[j].value();
  return g;
}

Eigen::MatrixXd ConditionalLikelihood::hessian(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd r = residuals(theta);
  const auto p = static_cast<Eigen::Index>(order_);
  std::vector<CompensatedSum> sums(static_cast<std::size_t>(p * (p + 1) / 2));
  for (std::size_t t = first_term_; t <= series_.size(); ++t) {
    const double d = innovation_.score_derivative(r(static_cast<Eigen::Index>(t - first_term_)));
    std::size_t k = 0;
    for (std::size_t j = 1; j <= order_; ++j)
      for (std::size_t i = j; i <= order_; ++i) sums[k++] += d * lag(t, j) * lag(t, i);
  }
  Eigen::MatrixXd h(p, p);
  std::size_t k = 0;
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = j; i < p; ++i) h(j, i) = h(i, j) = sums[k++].value();
  return h;
}

Eigen::MatrixXd ConditionalLikelihood::term_gradients(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd r = residuals(theta);
  Eigen::MatrixXd out(r.size(), static_cast<Eigen::Index>(order_));
  for (std::size_t t = first_term_; t <= series_.size(); ++t) {
    const auto row = static_cast<Eigen::Index>(t - first_term_);
    const double s = innovation_.score(r(row));
    for (std::size_t j = 1; j <= order_; ++j) out(row, static_cast<Eigen::Index>(j - 1)) = -s * lag(t, j);
  }
  return out;
}

Eigen::MatrixXd ConditionalLikelihood::lag_gram() const {
  const auto p = static_cast<Eigen::Index>(order_);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t t = first_term_; t <= series_.size(); ++t)
    for (std::size_t j = 1; j <= order_; ++j)
      for (std::size_t i = j; i <= order_; ++i)
        g(static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(i - 1)) += lag(t, j) * lag(t, i);
  return g.selfadjointView<Eigen::Upper>();
}

Eigen::VectorXd ConditionalLikelihood::lag_cross() const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(order_));
  for (std::size_t t = first_term_; t <= series_.size(); ++t)
    for (std::size_t j = 1; j <= order_; ++j) c(static_cast<Eigen::Index>(j - 1)) += lag(t, j) * series_[t - 1];
  return c;
}

double ConditionalLikelihood::penalized_objective(const Eigen::VectorXd& theta, const PenaltySpec& pen) const {
  return log_lik(theta) - static_cast<double>(series_.size()) * pen.total(theta);
}

}  // namespace sparse_ar
