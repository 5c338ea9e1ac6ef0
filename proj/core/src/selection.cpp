#include "sparse_ar/selection.hpp"

#include <algorithm>

#include "sparse_ar/error.hpp"
#include "sparse_ar/likelihood.hpp"

namespace sparse_ar {

double lag_regression_ssr(const TimeSeries& series, std::size_t order, std::size_t first_term) {
  const ConditionalLikelihood ctx(series, order, InnovationFamily::gaussian(1.0), first_term);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(ctx.lag_gram());
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(ldlt.rcond() > 1e-12)) {
    throw DegenerateData("lag design normal equations are singular");
  }
  const Eigen::VectorXd theta = ldlt.solve(ctx.lag_cross());
  return ctx.residuals(theta).squaredNorm();
}

OrderSelection fpe_select(const TimeSeries& series, std::size_t p_max) {
  if (p_max < 1) throw InvalidInput("p_max must be at least 1");
  const std::size_t n = series.size();
  if (n <= 3 * p_max) throw InvalidInput("FPE selection needs N > 3 p_max");
  const auto v = series.values();
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
    throw DegenerateData("series is constant");
  }

  // Every order is scored on t = p_max+1..N so the criteria are comparable.
  const double m = static_cast<double>(n - p_max);
  OrderSelection out;
  out.candidates.reserve(p_max);
  for (std::size_t p = 1; p <= p_max; ++p) {
    const double pd = static_cast<double>(p);
    const double sigma2 = lag_regression_ssr(series, p, p_max + 1) / m;
    out.candidates.push_back({p, sigma2, sigma2 * (m + pd) / (m - pd)});
  }
  out.chosen_order = out.candidates.front().order;
  double best = out.candidates.front().fpe;
  for (const auto& c : out.candidates) {
    if (c.fpe < best) {
      best = c.fpe;
      out.chosen_order = c.order;
    }
  }
  return out;
}

}  // namespace sparse_ar
