#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparse_ar/ar_model.hpp"
#include "sparse_ar/innovations.hpp"
#include "sparse_ar/likelihood.hpp"
#include "sparse_ar/penalty.hpp"

namespace sparse_ar {

enum class FitMethod { kMle, kLassoPcmle, kScadPcmle };

std::string to_string(FitMethod method);
FitMethod method_for(PenaltyKind kind);

struct SolverOptions {
  int newton_max_iter = 100;
  int max_step_halvings = 50;
  int prox_newton_max_iter = 200;
  int coordinate_max_sweeps = 10000;
  /// MLE stops once ||grad L|| < mle_gradient_tol * (number of terms).
  double mle_gradient_tol = 1e-8;
  /// Weighted-l1 solutions satisfy every coordinate's subgradient condition
  /// to this absolute tolerance.
  double stationarity_tol = 1e-8;
};

struct FitDiagnostics {
  int iterations = 0;
  /// ||grad L|| for the MLE; largest subgradient violation for penalized fits.
  double gradient_norm = 0.0;
  std::optional<double> holdout_loglik;
};

struct FitResult {
  Eigen::VectorXd estimates;
  /// 1-based lags j with estimates(j-1) != 0.
  std::vector<std::size_t> support;
  /// Sandwich standard errors; exactly 0 off the support.
  Eigen::VectorXd std_errors;
  std::optional<double> lambda_used;
  std::optional<double> a_used;
  FitMethod method = FitMethod::kMle;
  FitDiagnostics diagnostics;
};

/// Unpenalized conditional MLE by damped Newton from the least-squares start.
/// Requires N > 3p.
FitResult fit_mle(const TimeSeries& series, std::size_t order, const InnovationFamily& innovation,
                  const SolverOptions& options = {});

/// One-step LLA estimator: MLE pilot, weights p'_lambda(|pilot_j|), then the
/// weighted-l1 problem solved from the pilot.
FitResult fit_pcmle(const TimeSeries& series, std::size_t order, const InnovationFamily& innovation,
                    const PenaltySpec& pen, const SolverOptions& options = {});

/// Same as fit_pcmle but reusing an existing pilot fit on the same data.
FitResult fit_pcmle_from_pilot(const ConditionalLikelihood& ctx, const FitResult& pilot, const PenaltySpec& pen,
                               const SolverOptions& options = {});

struct WeightedL1Solution {
  Eigen::VectorXd theta;
  int iterations = 0;
  double stationarity = 0.0;
};

/// argmax_theta L(theta) - N * sum_j weights_j |theta_j|.
///
/// Gaussian innovations use exact coordinate descent on the lag Gram matrix.
/// Other families use proximal Newton: each outer step maximizes the
/// second-order model of L plus the l1 term by coordinate descent and is
/// accepted after step halving. Zeros in the result are exact.
WeightedL1Solution solve_weighted_l1(const ConditionalLikelihood& ctx, const Eigen::VectorXd& weights,
                                     const Eigen::VectorXd& theta_init, const SolverOptions& options = {});

/// Largest violation of the subgradient conditions of the weighted-l1
/// objective at theta.
double stationarity_violation(const ConditionalLikelihood& ctx, const Eigen::VectorXd& weights,
                              const Eigen::VectorXd& theta);

struct TuningGrid {
  std::vector<double> lambdas;
  /// SCAD only; ignored for LASSO.
  std::vector<double> as{kDefaultScadA};
  /// Fraction of the series (chronologically first) used for fitting.
  double split_fraction = 0.8;

  /// n values geometrically spaced from lo to hi inclusive.
  static std::vector<double> geometric(double lo, double hi, std::size_t n);
  void validate() const;
};

/// Chronological holdout tuning: fit on the first split_fraction of the
/// series, score the unpenalized conditional likelihood of the holdout block
/// (conditioning on the tail of the training block), refit the winner on the
/// full series. Ties go to larger lambda, then larger a.
FitResult tune(const TimeSeries& series, std::size_t order, const InnovationFamily& innovation, PenaltyKind kind,
               const TuningGrid& grid, const SolverOptions& options = {});

/// Sandwich standard errors on the support of fit.estimates:
///   (H - N diag(p'(|phi|)/|phi|))^{-1} G (H - N diag(p'(|phi|)/|phi|))^{-1}
/// with H the log-likelihood Hessian and G the outer product of per-term
/// gradients. Without a penalty the bracket is H alone. Entries off the
/// support are 0.
Eigen::VectorXd sandwich_se(const ConditionalLikelihood& ctx, const FitResult& fit,
                            const std::optional<PenaltySpec>& pen);

}  // namespace sparse_ar
