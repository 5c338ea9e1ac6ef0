#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sparse_ar/innovations.hpp"

namespace sparse_ar {

/// Observed series X_1..X_N. Non-empty, all values finite.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  /// Zero-based access; X_t is at(t - 1).
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Chronological slice [first, first + count).
  TimeSeries slice(std::size_t first, std::size_t count) const;

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::vector<double> values_;
};

/// X_t = phi_1 X_{t-1} + ... + phi_p X_{t-p} + Z_t with Z_t ~ g.
///
/// Construction validates shape and finiteness only; operations that need a
/// stationary process (simulation, autocovariances) check causality.
class ArModel {
 public:
  ArModel(Eigen::VectorXd coefficients, InnovationFamily innovation);

  std::size_t order() const noexcept { return static_cast<std::size_t>(coefficients_.size()); }
  const Eigen::VectorXd& coefficients() const noexcept { return coefficients_; }
  const InnovationFamily& innovation() const noexcept { return innovation_; }

 private:
  Eigen::VectorXd coefficients_;
  InnovationFamily innovation_;
};

/// Models whose companion spectral radius is within this of 1 are rejected.
inline constexpr double kCausalityTolerance = 1e-8;

struct CausalityCheck {
  bool causal;
  double spectral_radius;
};

/// Causality via the eigenvalues of the p x p companion matrix.
CausalityCheck check_causality(const Eigen::VectorXd& coefficients);

/// Autocovariances gamma(0..H) of a stationary process.
struct AutocovKernel {
  std::vector<double> gammas;

  std::size_t horizon() const noexcept { return gammas.empty() ? 0 : gammas.size() - 1; }
  double operator()(std::size_t h) const { return gammas.at(h); }
  /// (H+1) x (H+1) symmetric Toeplitz matrix with entries gamma(|i-j|).
  Eigen::MatrixXd toeplitz() const;
};

inline constexpr std::size_t kDefaultBurnIn = 1000;

/// n observations of the stationary process. The recursion starts from p
/// zeros and the first burn_in values are discarded. Bit-identical output for
/// identical arguments.
TimeSeries simulate(const ArModel& model, std::size_t n, std::size_t burn_in, std::uint64_t seed);

/// Yule-Walker solution for gamma(0..p), extended past p by the AR recursion.
AutocovKernel theoretical_autocov(const ArModel& model, std::size_t horizon);

/// gamma_hat(h) = (1/N) sum_{i=1}^{N-h} X_i X_{i+h}; no mean correction.
AutocovKernel sample_autocov(const TimeSeries& series, std::size_t horizon);

}  // namespace sparse_ar
