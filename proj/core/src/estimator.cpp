#include "sparse_ar/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparse_ar/error.hpp"

namespace sparse_ar {
namespace {

double soft_threshold(double z, double kappa) {
  if (z > kappa) return z - kappa;
  if (z < -kappa) return z + kappa;
  return 0.0;
}

// Subgradient violation for max c'u - u'Gu/2 - sum kappa_j |u_j|, given the
// smooth gradient r = c - G u.
double kkt_violation(const Eigen::VectorXd& r, const Eigen::VectorXd& u, const Eigen::VectorXd& kappa) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double v = u(j) != 0.0 ? std::abs(r(j) - kappa(j) * (u(j) > 0.0 ? 1.0 : -1.0))
                                 : std::max(std::abs(r(j)) - kappa(j), 0.0);
    worst = std::max(worst, v);
  }
  return worst;
}

struct CoordinateDescentResult {
  Eigen::VectorXd u;
  int sweeps = 0;
  double violation = 0.0;
  bool converged = false;
};

// Maximizes c'u - u'Gu/2 - sum kappa_j |u_j| for symmetric PSD G. Alternates
// full sweeps with sweeps restricted to the current nonzero set.
CoordinateDescentResult coordinate_descent(const Eigen::MatrixXd& gram, const Eigen::VectorXd& c,
                                           const Eigen::VectorXd& kappa, Eigen::VectorXd u, double tol,
                                           int max_sweeps) {
  const Eigen::Index p = u.size();
  CoordinateDescentResult out;
  auto update = [&](Eigen::Index j, Eigen::VectorXd& r) {
    const double gjj = gram(j, j);
    const double next = gjj > 0.0 ? soft_threshold(r(j) + gjj * u(j), kappa(j)) / gjj : 0.0;
    const double delta = next - u(j);
    if (delta != 0.0) {
      u(j) = next;
      r.noalias() -= gram.col(j) * delta;
    }
  };

  Eigen::VectorXd r = c - gram * u;
  while (out.sweeps < max_sweeps) {
    for (Eigen::Index j = 0; j < p; ++j) update(j, r);
    ++out.sweeps;
    r = c - gram * u;
    out.violation = kkt_violation(r, u, kappa);
    if (out.violation <= tol) {
      out.converged = true;
      break;
    }
    // Active-set passes until the nonzero coordinates are settled.
    while (out.sweeps < max_sweeps) {
      double active_violation = 0.0;
      for (Eigen::Index j = 0; j < p; ++j)
        if (u(j) != 0.0) update(j, r);
      ++out.sweeps;
      r = c - gram * u;
      for (Eigen::Index j = 0; j < p; ++j) {
        if (u(j) != 0.0) active_violation = std::max(active_violation, std::abs(r(j) - kappa(j) * (u(j) > 0 ? 1 : -1)));
      }
      if (active_violation <= tol) break;
    }
  }
  out.u = std::move(u);
  return out;
}

// Accepts a trial point unless it lowers the objective by more than its
// evaluation roundoff; near the optimum, gradient steps change the objective by
// less than one ulp of its value.
bool no_worse(double value, double current) {
  return value >= current || current - value <= 1e-13 * std::abs(current);
}

std::vector<std::size_t> support_of(const Eigen::VectorXd& theta) {
  std::vector<std::size_t> s;
  for (Eigen::Index j = 0; j < theta.size(); ++j)
    if (theta(j) != 0.0) s.push_back(static_cast<std::size_t>(j + 1));
  return s;
}

double penalized_value(const ConditionalLikelihood& ctx, const Eigen::VectorXd& kappa, const Eigen::VectorXd& theta) {
  return ctx.log_lik(theta) - kappa.dot(theta.cwiseAbs());
}

// -H made positive definite, shifting the spectrum if needed.
Eigen::MatrixXd positive_curvature(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& theta) {
  Eigen::MatrixXd b = -hessian;
  if (!b.allFinite()) throw ConvergenceError("log-likelihood curvature is not finite", theta);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  const double scale = std::max(1.0, b.diagonal().cwiseAbs().maxCoeff());
  if (min_eig <= 1e-10 * scale) b.diagonal().array() += (1e-6 * scale - min_eig);
  const Eigen::LLT<Eigen::MatrixXd> llt(b);
  if (llt.info() != Eigen::Success) throw ConvergenceError("curvature is not positive definite after damping", theta);
  return b;
}

WeightedL1Solution solve_gaussian(const ConditionalLikelihood& ctx, const Eigen::VectorXd& weights,
                                  const Eigen::VectorXd& theta_init, const SolverOptions& options) {
  const double sigma2 = ctx.innovation().variance();
  const double n = static_cast<double>(ctx.sample_size());
  const Eigen::MatrixXd gram = ctx.lag_gram();
  const Eigen::VectorXd cross = ctx.lag_cross();
  const Eigen::VectorXd kappa = n * sigma2 * weights;
  // Work in the sigma^2-scaled problem; L-scale violations are these / sigma^2.
  const double tol = 0.5 * options.stationarity_tol * sigma2;
  auto cd = coordinate_descent(gram, cross, kappa, theta_init, tol, options.coordinate_max_sweeps);
  if (!cd.converged) throw ConvergenceError("coordinate descent hit its sweep limit", cd.u);
  WeightedL1Solution out{std::move(cd.u), cd.sweeps, 0.0};
  out.stationarity = stationarity_violation(ctx, weights, out.theta);
  return out;
}

WeightedL1Solution solve_prox_newton(const ConditionalLikelihood& ctx, const Eigen::VectorXd& weights,
                                     const Eigen::VectorXd& theta_init, const SolverOptions& options) {
  const double n = static_cast<double>(ctx.sample_size());
  const Eigen::VectorXd kappa = n * weights;
  Eigen::VectorXd theta = theta_init;
  WeightedL1Solution out;
  double current = penalized_value(ctx, kappa, theta);
  for (int iter = 0; iter < options.prox_newton_max_iter; ++iter) {
    out.stationarity = stationarity_violation(ctx, weights, theta);
    if (out.stationarity <= options.stationarity_tol) {
      out.theta = std::move(theta);
      out.iterations = iter;
      return out;
    }
    const Eigen::VectorXd grad = ctx.gradient(theta);
    const Eigen::MatrixXd curv = positive_curvature(ctx.hessian(theta), theta);
    const Eigen::VectorXd linear = curv * theta + grad;
    auto cd = coordinate_descent(curv, linear, kappa, theta, 0.1 * options.stationarity_tol,
                                 options.coordinate_max_sweeps);
    const Eigen::VectorXd step = cd.u - theta;

    double t = 1.0;
    Eigen::VectorXd candidate = cd.u;
    double value = penalized_value(ctx, kappa, candidate);
    int halvings = 0;
    while (!no_worse(value, current) && halvings < options.max_step_halvings) {
      t *= 0.5;
      ++halvings;
      candidate = theta + t * step;
      value = penalized_value(ctx, kappa, candidate);
    }
    if (!no_worse(value, current)) throw ConvergenceError("proximal Newton line search failed", theta);
    if (candidate == theta) {
      throw ConvergenceError("proximal Newton stalled before reaching stationarity", theta);
    }
    theta = std::move(candidate);
    current = value;
  }
  out.stationarity = stationarity_violation(ctx, weights, theta);
  if (out.stationarity <= options.stationarity_tol) {
    out.theta = std::move(theta);
    out.iterations = options.prox_newton_max_iter;
    return out;
  }
  throw ConvergenceError("proximal Newton hit its iteration limit", theta);
}

bool is_constant(const TimeSeries& series) {
  const auto v = series.values();
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

std::string to_string(FitMethod method) {
  switch (method) {
    case FitMethod::kMle:
      return "mle";
    case FitMethod::kLassoPcmle:
      return "lasso_pcmle";
    case FitMethod::kScadPcmle:
      return "scad_pcmle";
  }
  return "unknown";
}

FitMethod method_for(PenaltyKind kind) {
  return kind == PenaltyKind::kScad ? FitMethod::kScadPcmle : FitMethod::kLassoPcmle;
}

double stationarity_violation(const ConditionalLikelihood& ctx, const Eigen::VectorXd& weights,
                              const Eigen::VectorXd& theta) {
  const Eigen::VectorXd kappa = static_cast<double>(ctx.sample_size()) * weights;
  return kkt_violation(ctx.gradient(theta), theta, kappa);
}

WeightedL1Solution solve_weighted_l1(const ConditionalLikelihood& ctx, const Eigen::VectorXd& weights,
                                     const Eigen::VectorXd& theta_init, const SolverOptions& options) {
  const auto p = static_cast<Eigen::Index>(ctx.order());
  if (weights.size() != p || theta_init.size() != p) throw InvalidInput("weights and start must have length p");
  if (!weights.allFinite() || (weights.array() < 0.0).any()) throw InvalidInput("l1 weights must be finite and >= 0");
  if (!theta_init.allFinite()) throw InvalidInput("starting coefficients must be finite");
  if (ctx.innovation().kind() == InnovationKind::kGaussian) return solve_gaussian(ctx, weights, theta_init, options);
  return solve_prox_newton(ctx, weights, theta_init, options);
}

FitResult fit_mle(const TimeSeries& series, std::size_t order, const InnovationFamily& innovation,
                  const SolverOptions& options) {
  if (order < 1) throw InvalidInput("AR order must be at least 1");
  if (series.size() <= 3 * order) throw InvalidInput("fitting AR(p) needs N > 3p observations");
  if (is_constant(series)) throw DegenerateData("series is constant; the lag regression is degenerate");

  const ConditionalLikelihood ctx(series, order, innovation);
  const Eigen::MatrixXd gram = ctx.lag_gram();
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(ldlt.rcond() > 1e-12)) {
    throw DegenerateData("lag design normal equations are singular");
  }
  Eigen::VectorXd theta = ldlt.solve(ctx.lag_cross());

  const double tol = options.mle_gradient_tol * static_cast<double>(ctx.term_count());
  std::optional<double> info_constant;
  FitResult fit;
  double current = ctx.log_lik(theta);
  int iter = 0;
  double grad_norm = 0.0;
  for (;; ++iter) {
    const Eigen::VectorXd grad = ctx.gradient(theta);
    grad_norm = grad.norm();
    if (grad_norm < tol) break;
    if (iter >= options.newton_max_iter) throw ConvergenceError("Newton iteration limit reached", theta);

    Eigen::VectorXd step;
    const Eigen::LLT<Eigen::MatrixXd> llt(-ctx.hessian(theta));
    if (llt.info() == Eigen::Success) {
      step = llt.solve(grad);
    } else {
      // Expected information C(g) * Gram is positive definite.
      if (!info_constant) info_constant = innovation.information_constant();
      step = ldlt.solve(grad) / *info_constant;
    }
    double t = 1.0;
    Eigen::VectorXd candidate = theta + step;
    double value = ctx.log_lik(candidate);
    int halvings = 0;
    while (!no_worse(value, current) && halvings < options.max_step_halvings) {
      t *= 0.5;
      ++halvings;
      candidate = theta + t * step;
      value = ctx.log_lik(candidate);
    }
    if (!no_worse(value, current)) throw ConvergenceError("Newton step halving failed to increase the likelihood", theta);
    if (candidate == theta) throw ConvergenceError("Newton iteration stalled", theta);
    theta = std::move(candidate);
    current = value;
  }

  fit.estimates = theta;
  fit.support = support_of(theta);
  fit.method = FitMethod::kMle;
  fit.diagnostics.iterations = iter;
  fit.diagnostics.gradient_norm = grad_norm;
  fit.std_errors = fit.support.empty() ? Eigen::VectorXd::Zero(theta.size()) : sandwich_se(ctx, fit, std::nullopt);
  return fit;
}

FitResult fit_pcmle_from_pilot(const ConditionalLikelihood& ctx, const FitResult& pilot, const PenaltySpec& pen,
                               const SolverOptions& options) {
  const Eigen::Index p = pilot.estimates.size();
  Eigen::VectorXd weights(p);
  for (Eigen::Index j = 0; j < p; ++j) weights(j) = pen.derivative(std::abs(pilot.estimates(j)));
  auto solution = solve_weighted_l1(ctx, weights, pilot.estimates, options);

  FitResult fit;
  fit.estimates = std::move(solution.theta);
  fit.support = support_of(fit.estimates);
  fit.lambda_used = pen.lambda();
  if (pen.kind() == PenaltyKind::kScad) fit.a_used = pen.a();
  fit.method = method_for(pen.kind());
  fit.diagnostics.iterations = pilot.diagnostics.iterations + solution.iterations;
  fit.diagnostics.gradient_norm = solution.stationarity;
  fit.std_errors = fit.support.empty() ? Eigen::VectorXd::Zero(p) : sandwich_se(ctx, fit, pen);
  return fit;
}

FitResult fit_pcmle(const TimeSeries& series, std::size_t order, const InnovationFamily& innovation,
                    const PenaltySpec& pen, const SolverOptions& options) {
  const FitResult pilot = fit_mle(series, order, innovation, options);
  const ConditionalLikelihood ctx(series, order, innovation);
  return fit_pcmle_from_pilot(ctx, pilot, pen, options);
}

std::vector<double> TuningGrid::geometric(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidInput("geometric grid needs at least one point");
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) throw InvalidInput("geometric grid needs 0 < lo <= hi");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double ratio = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo * std::exp(ratio * static_cast<double>(i));
  out.back() = hi;
  return out;
}

void TuningGrid::validate() const {
  if (lambdas.empty()) throw InvalidInput("tuning grid has no lambda values");
  for (double l : lambdas)
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidInput("tuning lambdas must be positive and finite");
  for (double a : as)
    if (!(a > 2.0) || !std::isfinite(a)) throw InvalidInput("tuning a values must exceed 2");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) throw InvalidInput("split fraction must lie in (0, 1)");
}

FitResult tune(const TimeSeries& series, std::size_t order, const InnovationFamily& innovation, PenaltyKind kind,
               const TuningGrid& grid, const SolverOptions& options) {
  grid.validate();
  if (kind == PenaltyKind::kScad && grid.as.empty()) throw InvalidInput("SCAD tuning grid has no a values");
  const std::size_t n = series.size();
  const auto n_train = static_cast<std::size_t>(std::floor(grid.split_fraction * static_cast<double>(n)));
  if (n_train <= 3 * order || n - n_train <= 3 * order) {
    throw InvalidInput("holdout split must leave more than 3p observations on each side");
  }
  const TimeSeries train = series.slice(0, n_train);
  const ConditionalLikelihood train_ctx(train, order, innovation);
  const ConditionalLikelihood holdout_ctx(series, order, innovation, n_train + 1);
  const FitResult pilot = fit_mle(train, order, innovation, options);

  std::vector<double> lambdas = grid.lambdas;
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  std::vector<double> as = kind == PenaltyKind::kScad ? grid.as : std::vector<double>{kDefaultScadA};
  std::sort(as.begin(), as.end(), std::greater<>());

  // Candidates are visited from sparsest to least sparse; strict improvement
  // is required to move, which implements the tie-breaking rule.
  std::optional<PenaltySpec> best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (double lambda : lambdas) {
    for (double a : as) {
      const PenaltySpec pen = kind == PenaltyKind::kScad ? PenaltySpec::scad(lambda, a) : PenaltySpec::lasso(lambda);
      const FitResult candidate = fit_pcmle_from_pilot(train_ctx, pilot, pen, options);
      const double score = holdout_ctx.log_lik(candidate.estimates);
      if (!best || score > best_score) {
        best = pen;
        best_score = score;
      }
    }
  }
  FitResult fit = fit_pcmle(series, order, innovation, *best, options);
  fit.diagnostics.holdout_loglik = best_score;
  return fit;
}

Eigen::VectorXd sandwich_se(const ConditionalLikelihood& ctx, const FitResult& fit,
                            const std::optional<PenaltySpec>& pen) {
  const Eigen::VectorXd& theta = fit.estimates;
  const auto p = static_cast<Eigen::Index>(ctx.order());
  if (theta.size() != p) throw InvalidInput("fit dimension does not match the likelihood order");
  std::vector<Eigen::Index> idx;
  for (Eigen::Index j = 0; j < p; ++j)
    if (theta(j) != 0.0) idx.push_back(j);
  if (idx.empty()) throw InvalidInput("sandwich standard errors need a non-empty support");

  const auto s = static_cast<Eigen::Index>(idx.size());
  const Eigen::MatrixXd hess = ctx.hessian(theta);
  const Eigen::MatrixXd terms = ctx.term_gradients(theta);
  const double n = static_cast<double>(ctx.sample_size());

  Eigen::MatrixXd bracket(s, s);
  Eigen::MatrixXd scores(terms.rows(), s);
  for (Eigen::Index a = 0; a < s; ++a) {
    scores.col(a) = terms.col(idx[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < s; ++b) bracket(a, b) = hess(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    if (pen) {
      const double x = std::abs(theta(idx[static_cast<std::size_t>(a)]));
      bracket(a, a) -= n * pen->derivative(x) / x;
    }
  }
  const Eigen::MatrixXd meat = scores.transpose() * scores;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(bracket);
  if (!lu.isInvertible() || !(lu.rcond() > 1e-14)) throw DegenerateData("sandwich bracket matrix is singular");
  const Eigen::MatrixXd inv = lu.inverse();
  const Eigen::MatrixXd cov = inv * meat * inv.transpose();

  Eigen::VectorXd se = Eigen::VectorXd::Zero(p);
  for (Eigen::Index a = 0; a < s; ++a) se(idx[static_cast<std::size_t>(a)]) = std::sqrt(std::max(cov(a, a), 0.0));
  return se;
}

}  // namespace sparse_ar
