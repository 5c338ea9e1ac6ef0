#pragma once

#include <cstddef>
#include <vector>

#include "sparse_ar/ar_model.hpp"

namespace sparse_ar {

struct OrderCandidate {
  std::size_t order;
  /// SSR / M of the least-squares fit on the common window, M = N - p_max.
  double sigma2;
  /// sigma2 * (M + p) / (M - p).
  double fpe;
};

struct OrderSelection {
  std::vector<OrderCandidate> candidates;
  std::size_t chosen_order;
};

/// Final Prediction Error over orders 1..p_max; ties resolve to the smaller
/// order. Every order is fitted by Gaussian conditional least squares on the
/// same window t = p_max+1..N, so sigma2 is nonincreasing in p. Requires
/// N > 3 p_max.
OrderSelection fpe_select(const TimeSeries& series, std::size_t p_max);

/// Residual sum of squares of the least-squares AR(p) fit over terms
/// t = first_term..N (1-based, first_term > p). With a shared first_term,
/// fits of increasing order are nested.
double lag_regression_ssr(const TimeSeries& series, std::size_t order, std::size_t first_term);

}  // namespace sparse_ar
