#include "sparse_ar/ar_model.hpp"

#include <cmath>
#include <string>

#include "sparse_ar/error.hpp"

namespace sparse_ar {
namespace {

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw InvalidInput(std::string(what) + " contains non-finite entries");
}

void require_causal(const ArModel& model) {
  const auto check = check_causality(model.coefficients());
  if (!check.causal) {
    throw ModelError("AR model is not causal (companion spectral radius " +
                     std::to_string(check.spectral_radius) + ")");
  }
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("time series must contain at least one observation");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidInput("time series value at position " + std::to_string(i + 1) + " is not finite");
    }
  }
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
  if (first + count > values_.size()) throw InvalidInput("time series slice out of range");
  return TimeSeries(std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                        values_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

ArModel::ArModel(Eigen::VectorXd coefficients, InnovationFamily innovation)
    : coefficients_(std::move(coefficients)), innovation_(innovation) {
  if (coefficients_.size() < 1) throw InvalidInput("AR order must be at least 1");
  require_finite(coefficients_, "AR coefficients");
}

CausalityCheck check_causality(const Eigen::VectorXd& coefficients) {
  if (coefficients.size() < 1) throw InvalidInput("coefficient vector is empty");
  require_finite(coefficients, "coefficient vector");
  const Eigen::Index p = coefficients.size();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  companion.row(0) = coefficients.transpose();
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
  return {radius < 1.0 - kCausalityTolerance, radius};
}

Eigen::MatrixXd AutocovKernel::toeplitz() const {
  const auto n = static_cast<Eigen::Index>(gammas.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = gammas[static_cast<std::size_t>(std::abs(i - j))];
  return m;
}

TimeSeries simulate(const ArModel& model, std::size_t n, std::size_t burn_in, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("simulate requires n >= 1");
  require_causal(model);
  const std::size_t p = model.order();
  const auto& phi = model.coefficients();
  const std::vector<double> z = model.innovation().sample(n + burn_in, seed);

  // Leading p zeros hold the initial state.
  std::vector<double> x(p + n + burn_in, 0.0);
  for (std::size_t t = p; t < x.size(); ++t) {
    double acc = z[t - p];
    for (std::size_t j = 1; j <= p; ++j) acc += phi[static_cast<Eigen::Index>(j - 1)] * x[t - j];
    x[t] = acc;
  }
  return TimeSeries(std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(p + burn_in), x.end()));
}

AutocovKernel theoretical_autocov(const ArModel& model, std::size_t horizon) {
  require_causal(model);
  const double sigma2 = model.innovation().variance();
  if (!std::isfinite(sigma2)) throw InvalidInput("autocovariances need an innovation law with finite variance");

  const auto p = static_cast<Eigen::Index>(model.order());
  const auto& phi = model.coefficients();
  // Unknowns gamma(0..p):
  //   gamma(0) - sum_j phi_j gamma(j)        = sigma^2
  //   gamma(h) - sum_j phi_j gamma(|h - j|)  = 0,  h = 1..p
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p + 1, p + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p + 1);
  b(0) = sigma2;
  for (Eigen::Index h = 0; h <= p; ++h)
    for (Eigen::Index j = 1; j <= p; ++j) a(h, std::abs(h - j)) -= phi(j - 1);
  const Eigen::VectorXd head = a.partialPivLu().solve(b);

  AutocovKernel kernel;
  kernel.gammas.resize(horizon + 1);
  for (std::size_t h = 0; h <= horizon; ++h) {
    if (static_cast<Eigen::Index>(h) <= p) {
      kernel.gammas[h] = head(static_cast<Eigen::Index>(h));
      continue;
    }
    double acc = 0.0;
    for (Eigen::Index j = 1; j <= p; ++j) acc += phi(j - 1) * kernel.gammas[h - static_cast<std::size_t>(j)];
    kernel.gammas[h] = acc;
  }
  return kernel;
}

AutocovKernel sample_autocov(const TimeSeries& series, std::size_t horizon) {
  const std::size_t n = series.size();
  if (horizon >= n) throw InvalidInput("sample autocovariance horizon must be smaller than the series length");
  AutocovKernel kernel;
  kernel.gammas.resize(horizon + 1);
  for (std::size_t h = 0; h <= horizon; ++h) {
    double acc = 0.0;
    for (std::size_t i = 0; i + h < n; ++i) acc += series[i] * series[i + h];
    kernel.gammas[h] = acc / static_cast<double>(n);
  }
  return kernel;
}

}  // namespace sparse_ar
