#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparse_ar/ar_model.hpp"

namespace sparse_ar {

/// k-step-ahead point forecast from the end of history; forecasts replace
/// unobserved lags and future innovations are set to their mean, 0.
double forecast_k(const Eigen::VectorXd& coefficients, std::span<const double> history, std::size_t k);

/// d_t = X_{t+1} - X_t. Needs at least two observations.
TimeSeries difference(const TimeSeries& series);
/// Inverse of difference() given X_1.
TimeSeries undifference(const TimeSeries& diffs, double anchor);

struct ForecastScore {
  std::size_t steps;
  /// Number of forecasts m (holdout length).
  std::size_t forecasts;
  /// Forecast origins actually scored, s = 0..m-k.
  std::size_t origins;
  /// sum_s |F(N+s+k) - X(N+s+k)| / (m |X(N+s)|)
  double mae;
  /// sum_s sqrt( (F(N+s+k) - X(N+s+k))^2 / (m X(N+s)^2) )
  double rmse;
  /// Plain mean absolute and root-mean-square errors over the same origins.
  double conventional_mae;
  double conventional_rmse;
};

/// Rolling-origin evaluation on a level series.
///
/// actuals holds X(1..N+m); the model sees X(1..N+s) at origin s. With
/// differencing_order 1 the coefficients describe the differenced series and
/// forecasts are integrated back onto the level of X(N+s).
ForecastScore score_forecasts(const TimeSeries& actuals, const Eigen::VectorXd& coefficients, std::size_t in_sample,
                              std::size_t steps, std::size_t holdout, int differencing_order = 0);

}  // namespace sparse_ar
