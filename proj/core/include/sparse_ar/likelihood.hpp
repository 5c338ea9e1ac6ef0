#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "sparse_ar/ar_model.hpp"
#include "sparse_ar/innovations.hpp"
#include "sparse_ar/penalty.hpp"

namespace sparse_ar {

/// L(theta) = sum_{t=first}^{N} log g(X_t - sum_j phi_j X_{t-j}).
///
/// By default first = p + 1, the conditional likelihood given the first p
/// observations. A later first term scores a trailing block of the series
/// while conditioning on the observations just before it.
class ConditionalLikelihood {
 public:
  ConditionalLikelihood(TimeSeries series, std::size_t order, InnovationFamily innovation);
  /// first_term is 1-based and must be > order.
  ConditionalLikelihood(TimeSeries series, std::size_t order, InnovationFamily innovation, std::size_t first_term);

  const TimeSeries& series() const noexcept { return series_; }
  std::size_t order() const noexcept { return order_; }
  const InnovationFamily& innovation() const noexcept { return innovation_; }
  /// Sample length N.
  std::size_t sample_size() const noexcept { return series_.size(); }
  /// Number of likelihood terms.
  std::size_t term_count() const noexcept { return series_.size() - first_term_ + 1; }
  std::size_t first_term() const noexcept { return first_term_; }

  /// X_t - sum_j phi_j X_{t-j} for every term, in time order.
  Eigen::VectorXd residuals(const Eigen::VectorXd& theta) const;

  double log_lik(const Eigen::VectorXd& theta) const;
  /// dL/dphi_j = -sum_t (g'/g)(r_t) X_{t-j}.
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const;
  /// Entry (j, i) = sum_t (g'/g)'(r_t) X_{t-j} X_{t-i}.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& theta) const;
  /// Row t holds the gradient contribution of term t.
  Eigen::MatrixXd term_gradients(const Eigen::VectorXd& theta) const;

  /// Lag design Gram matrix sum_t X_{t-j} X_{t-i} and cross products
  /// sum_t X_{t-j} X_t over the likelihood terms.
  Eigen::MatrixXd lag_gram() const;
  Eigen::VectorXd lag_cross() const;

  /// Q(theta) = L(theta) - N * sum_j p_lambda(|phi_j|), with N the full
  /// sample length.
  double penalized_objective(const Eigen::VectorXd& theta, const PenaltySpec& pen) const;

 private:
  void require_dimension(const Eigen::VectorXd& theta) const;
  double lag(std::size_t t, std::size_t j) const noexcept { return series_[t - 1 - j]; }

  TimeSeries series_;
  std::size_t order_;
  InnovationFamily innovation_;
  std::size_t first_term_;
};

}  // namespace sparse_ar
