#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparse_ar/estimator.hpp"
#include "sparse_ar/innovations.hpp"

namespace sparse_ar {

/// SplitMix64 finalizer applied to (key, value); the seed-derivation hash.
std::uint64_t mix_seed(std::uint64_t key, std::uint64_t value) noexcept;

/// Seed of replication r at sample size n: mix(mix(master, n), r).
std::uint64_t replication_seed(std::uint64_t master, std::size_t n, std::size_t replication) noexcept;

/// Coefficients that may scale with the sample size:
/// phi_j(N) = scales_j * N^exponents_j. A zero exponent gives a fixed value.
struct CoefficientPattern {
  std::vector<double> scales;
  std::vector<double> exponents;

  static CoefficientPattern fixed(std::vector<double> values);
  std::size_t order() const noexcept { return scales.size(); }
  Eigen::VectorXd at(std::size_t n) const;
  /// Lags (1-based) whose coefficient is exactly zero for every N.
  std::vector<std::size_t> zero_lags() const;
};

struct MethodSpec {
  FitMethod method = FitMethod::kMle;
  /// Unused for kMle.
  TuningGrid grid;
  /// Lambdas are multiplied by (N / reference_n)^lambda_exponent; 0 keeps
  /// one grid for every N.
  double lambda_exponent = 0.0;
  double reference_n = 1000.0;

  TuningGrid grid_for(std::size_t n) const;
};

struct ExperimentDesign {
  CoefficientPattern model;
  InnovationFamily innovation = InnovationFamily::gaussian(1.0);
  std::vector<std::size_t> sample_sizes;
  std::size_t replications = 100;
  std::vector<MethodSpec> methods;
  std::uint64_t master_seed = 0;
  std::size_t burn_in = 1000;
  SolverOptions solver;

  void validate() const;
};

struct ReplicationRecord {
  FitMethod method;
  std::size_t n;
  std::size_t replication;
  std::uint64_t seed;
  bool converged;
  std::string failure;
  std::optional<double> lambda;
  std::optional<double> a;
  Eigen::VectorXd estimates;
  Eigen::VectorXd truth;
  double l2_error;
};

struct Proportion {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double value() const noexcept { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
  /// Wilson 95% score interval.
  std::pair<double, double> wilson() const noexcept;
};

struct LagSummary {
  std::size_t lag;
  double truth;
  Proportion zero;
  /// |mean(estimate) - truth| over converged replications.
  double average_bias;
};

struct CellSummary {
  FitMethod method;
  std::size_t n;
  std::size_t replications;
  std::size_t failures;
  std::vector<LagSummary> lags;
  /// All exactly-zero true coefficients estimated as zero at once.
  Proportion all_zero;
  double median_l2;
  double mean_l2;
};

struct McSummary {
  std::string innovation;
  double innovation_parameter;
  bool assumptions_2_satisfied;
  std::vector<std::size_t> zero_lags;
  std::vector<CellSummary> cells;

  const CellSummary& cell(FitMethod method, std::size_t n) const;
};

struct ExperimentResult {
  std::vector<ReplicationRecord> raw;
  McSummary summary;
};

/// Simulates every (N, replication) pair once, fits each method on that same
/// series, and aggregates. Work is spread over `threads` workers; results do
/// not depend on the thread count. A replication whose fit fails is recorded
/// with converged = false rather than aborting the run.
ExperimentResult run_experiment(const ExperimentDesign& design, std::size_t threads = 1);

McSummary summarize(const ExperimentDesign& design, const std::vector<ReplicationRecord>& raw);

struct CurvePoint {
  FitMethod method;
  std::size_t n;
  /// Lag number, or "both"/"all_zero" for the joint event.
  std::string lag;
  Proportion probability;
};

/// P(zero estimate) against N per lag and method, in long format.
std::vector<CurvePoint> probability_curve(const McSummary& summary);

void write_raw_csv(std::ostream& out, const std::vector<ReplicationRecord>& raw);
void write_summary_csv(std::ostream& out, const McSummary& summary);
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

struct ProportionTest {
  double z;
  double p_value;
};

/// Pooled two-sided two-proportion z-test.
ProportionTest two_proportion_test(const Proportion& first, const Proportion& second);

/// Shortest round-trip decimal text of a double.
std::string format_double(double x);

}  // namespace sparse_ar
