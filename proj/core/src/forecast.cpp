#include "sparse_ar/forecast.hpp"

#include <cmath>
#include <string>

#include "sparse_ar/error.hpp"

namespace sparse_ar {
namespace {

// Forecasts for h = 1..k from the end of history.
std::vector<double> forecast_path(const Eigen::VectorXd& phi, std::span<const double> history, std::size_t k) {
  const auto p = static_cast<std::size_t>(phi.size());
  if (p < 1) throw InvalidInput("forecasting needs at least one coefficient");
  if (k < 1) throw InvalidInput("forecast horizon must be at least 1");
  if (history.size() < p) throw InvalidInput("history is shorter than the AR order");
  std::vector<double> window(history.end() - static_cast<std::ptrdiff_t>(p), history.end());
  std::vector<double> path;
  path.reserve(k);
  for (std::size_t h = 0; h < k; ++h) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= p; ++j) acc += phi(static_cast<Eigen::Index>(j - 1)) * window[window.size() - j];
    path.push_back(acc);
    window.push_back(acc);
  }
  return path;
}

}  // namespace

double forecast_k(const Eigen::VectorXd& coefficients, std::span<const double> history, std::size_t k) {
  return forecast_path(coefficients, history, k).back();
}

TimeSeries difference(const TimeSeries& series) {
  if (series.size() < 2) throw InvalidInput("differencing needs at least two observations");
  std::vector<double> d(series.size() - 1);
  for (std::size_t t = 0; t + 1 < series.size(); ++t) d[t] = series[t + 1] - series[t];
  return TimeSeries(std::move(d));
}

TimeSeries undifference(const TimeSeries& diffs, double anchor) {
  if (!std::isfinite(anchor)) throw InvalidInput("undifference anchor must be finite");
  std::vector<double> x(diffs.size() + 1);
  x[0] = anchor;
  for (std::size_t t = 0; t < diffs.size(); ++t) x[t + 1] = x[t] + diffs[t];
  return TimeSeries(std::move(x));
}

ForecastScore score_forecasts(const TimeSeries& actuals, const Eigen::VectorXd& coefficients, std::size_t in_sample,
                              std::size_t steps, std::size_t holdout, int differencing_order) {
  if (differencing_order != 0 && differencing_order != 1) throw InvalidInput("differencing order must be 0 or 1");
  if (steps < 1 || holdout < steps) throw InvalidInput("need 1 <= k <= m");
  if (in_sample + holdout > actuals.size()) throw InvalidInput("series does not cover the holdout block");
  if (in_sample < 1) throw InvalidInput("in-sample length must be positive");

  const auto all = actuals.values();
  std::vector<double> diffs;
  if (differencing_order == 1) {
    diffs.resize(all.size() - 1);
    for (std::size_t t = 0; t + 1 < all.size(); ++t) diffs[t] = all[t + 1] - all[t];
  }

  const double m = static_cast<double>(holdout);
  ForecastScore out{steps, holdout, holdout - steps + 1, 0.0, 0.0, 0.0, 0.0};
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t s = 0; s + steps <= holdout; ++s) {
    // 1-based origin index N+s lives at zero-based position N+s-1.
    const std::size_t origin = in_sample + s;
    const double base = all[origin - 1];
    const double target = all[origin + steps - 1];
    if (base == 0.0) {
      throw ScoringError("forecast scoring denominator X(" + std::to_string(origin) + ") is zero",
                         static_cast<long>(origin));
    }
    double forecast = 0.0;
    if (differencing_order == 0) {
      forecast = forecast_k(coefficients, all.first(origin), steps);
    } else {
      // Differences d(1..origin-1) are known at this origin.
      const auto path = forecast_path(coefficients, std::span<const double>(diffs).first(origin - 1), steps);
      forecast = base;
      for (double d : path) forecast += d;
    }
    const double err = forecast - target;
    out.mae += std::abs(err) / (m * std::abs(base));
    out.rmse += std::sqrt(err * err / (m * base * base));
    abs_sum += std::abs(err);
    sq_sum += err * err;
  }
  const double count = static_cast<double>(out.origins);
  out.conventional_mae = abs_sum / count;
  out.conventional_rmse = std::sqrt(sq_sum / count);
  return out;
}

}  // namespace sparse_ar
