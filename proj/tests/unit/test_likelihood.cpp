#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sparse_ar/error.hpp"
#include "sparse_ar/likelihood.hpp"
#include "support.hpp"

using namespace sparse_ar;

TEST_CASE("residuals and Gaussian log-likelihood by hand") {
  const ConditionalLikelihood ctx(TimeSeries({1, 2, 3, 4}), 1, InnovationFamily::gaussian(1.0));
  CHECK(ctx.term_count() == 3);
  Eigen::VectorXd phi(1);
  phi << 0.5;
  const Eigen::VectorXd r = ctx.residuals(phi);
  REQUIRE(r.size() == 3);
  CHECK(r(0) == 1.5);
  CHECK(r(1) == 2.0);
  CHECK(r(2) == 2.5);
  const double want = -1.5 * std::log(2 * std::numbers::pi) - (2.25 + 4.0 + 6.25) / 2;
  CHECK(ctx.log_lik(phi) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("gradient and Hessian against finite differences") {
  std::mt19937_64 rng(5);
  for (const auto& innov : {InnovationFamily::gaussian(0.8), InnovationFamily::student_t(5.0), InnovationFamily::student_t(2.0)}) {
    for (int rep = 0; rep < 5; ++rep) {
      const std::size_t p = 1 + rep;
      const Eigen::VectorXd truth = testing::random_causal(rng, p);
      const TimeSeries x = simulate(ArModel(truth, innov), 200, 200, rng());
      const ConditionalLikelihood ctx(x, p, innov);
      const Eigen::VectorXd theta = truth + 0.05 * Eigen::VectorXd::Random(static_cast<Eigen::Index>(p));
      const auto fd_grad = testing::central_gradient([&](const Eigen::VectorXd& t) { return ctx.log_lik(t); }, theta, 1e-5);
      const auto fd_hess = testing::central_jacobian([&](const Eigen::VectorXd& t) { return ctx.gradient(t); }, theta, 1e-5);
      CHECK(testing::relative_error(ctx.gradient(theta), fd_grad) < 1e-6);
      CHECK(testing::relative_error(ctx.hessian(theta), fd_hess) < 1e-5);
    }
  }
}

TEST_CASE("per-term gradients sum to the gradient") {
  const auto innov = InnovationFamily::student_t(4.0);
  Eigen::VectorXd truth(3);
  truth << 0.3, -0.2, 0.1;
  const ConditionalLikelihood ctx(simulate(ArModel(truth, innov), 150, 100, 8), 3, innov);
  const Eigen::MatrixXd rows = ctx.term_gradients(truth);
  CHECK(rows.rows() == static_cast<Eigen::Index>(ctx.term_count()));
  CHECK(testing::relative_error(rows.colwise().sum().transpose(), ctx.gradient(truth)) < 1e-12);
}

TEST_CASE("Gaussian structure: Hessian is minus the Gram matrix over sigma^2") {
  Eigen::VectorXd truth(2);
  truth << 0.4, 0.2;
  const auto innov = InnovationFamily::gaussian(2.0);
  const ConditionalLikelihood ctx(simulate(ArModel(truth, innov), 100, 100, 2), 2, innov);
  CHECK(testing::relative_error(ctx.hessian(truth), -ctx.lag_gram() / 4.0) < 1e-13);
  CHECK(testing::relative_error(ctx.gradient(Eigen::VectorXd::Zero(2)), ctx.lag_cross() / 4.0) < 1e-13);
}

TEST_CASE("later first term scores a trailing block") {
  const auto innov = InnovationFamily::gaussian();
  Eigen::VectorXd phi(2);
  phi << 0.3, 0.1;
  const TimeSeries x = simulate(ArModel(phi, innov), 50, 10, 1);
  const ConditionalLikelihood full(x, 2, innov);
  const ConditionalLikelihood tail(x, 2, innov, 41);
  CHECK(tail.term_count() == 10);
  const Eigen::VectorXd r_full = full.residuals(phi);
  CHECK(tail.residuals(phi) == r_full.tail(10));
  double want = 0;
  for (Eigen::Index i = 38; i < r_full.size(); ++i) want += innov.log_density(r_full(i));
  CHECK(tail.log_lik(phi) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("penalized objective scales the penalty by N") {
  const auto innov = InnovationFamily::gaussian();
  Eigen::VectorXd phi(2);
  phi << 0.3, 0.0;
  const ConditionalLikelihood ctx(simulate(ArModel(phi, innov), 80, 10, 1), 2, innov);
  const auto pen = PenaltySpec::scad(0.1, 3.7);
  CHECK(ctx.penalized_objective(phi, pen) == doctest::Approx(ctx.log_lik(phi) - 80 * pen.total(phi)));
}

TEST_CASE("shape checks") {
  const TimeSeries x({1, 2, 3, 4, 5});
  CHECK_THROWS_AS(ConditionalLikelihood(x, 0, InnovationFamily::gaussian()), InvalidInput);
  CHECK_THROWS_AS(ConditionalLikelihood(x, 5, InnovationFamily::gaussian()), InvalidInput);
  CHECK_THROWS_AS(ConditionalLikelihood(x, 2, InnovationFamily::gaussian(), 2), InvalidInput);
  CHECK_THROWS_AS(ConditionalLikelihood(x, 2, InnovationFamily::gaussian(), 6), InvalidInput);
  const ConditionalLikelihood ctx(x, 2, InnovationFamily::gaussian());
  CHECK_THROWS_AS(ctx.log_lik(Eigen::VectorXd::Zero(3)), InvalidInput);
}
