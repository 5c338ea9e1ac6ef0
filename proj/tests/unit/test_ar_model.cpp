#include <doctest.h>

#include <cmath>
#include <random>

#include "sparse_ar/ar_model.hpp"
#include "sparse_ar/error.hpp"
#include "support.hpp"

using namespace sparse_ar;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// gamma(h) = var(Z) sum_k psi_k psi_{k+h} from the MA(infinity) weights.
std::vector<double> ma_autocov(const Eigen::VectorXd& phi, double var, std::size_t horizon, std::size_t terms) {
  std::vector<double> psi(terms + horizon, 0.0);
  psi[0] = 1.0;
  for (std::size_t k = 1; k < psi.size(); ++k) {
    for (Eigen::Index j = 1; j <= phi.size() && static_cast<std::size_t>(j) <= k; ++j) {
      psi[k] += phi(j - 1) * psi[k - static_cast<std::size_t>(j)];
    }
  }
  std::vector<double> gamma(horizon + 1, 0.0);
  for (std::size_t h = 0; h <= horizon; ++h) {
    for (std::size_t k = 0; k < terms; ++k) gamma[h] += psi[k] * psi[k + h];
    gamma[h] *= var;
  }
  return gamma;
}

}  // namespace

TEST_CASE("causality via companion eigenvalues") {
  const auto ar1 = check_causality(vec({0.5}));
  CHECK(ar1.causal);
  CHECK(ar1.spectral_radius == doctest::Approx(0.5));
  CHECK_FALSE(check_causality(vec({1.0})).causal);
  CHECK_FALSE(check_causality(vec({-1.2})).causal);
  // characteristic roots 0.8 and 0.7
  const auto ar2 = check_causality(vec({1.5, -0.56}));
  CHECK(ar2.causal);
  CHECK(ar2.spectral_radius == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(check_causality(vec({0.2, 0.0, 0.2, 0.0, 0.2})).causal);
  CHECK_FALSE(check_causality(vec({0.5, 0.5})).causal);
}

TEST_CASE("AR(1) autocovariance closed form") {
  const ArModel m(vec({0.6}), InnovationFamily::gaussian(2.0));
  const auto k = theoretical_autocov(m, 5);
  REQUIRE(k.horizon() == 5);
  for (std::size_t h = 0; h <= 5; ++h) {
    CHECK(k(h) == doctest::Approx(4.0 * std::pow(0.6, static_cast<double>(h)) / (1 - 0.36)).epsilon(1e-13));
  }
}

TEST_CASE("Yule-Walker autocovariances match MA(infinity) truncation") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t p = 1 + rep % 6;
    const Eigen::VectorXd phi = testing::random_causal(rng, p);
    const auto innov = rep % 2 ? InnovationFamily::student_t(5.0) : InnovationFamily::gaussian(1.0);
    const auto got = theoretical_autocov(ArModel(phi, innov), 12);
    const auto want = ma_autocov(phi, innov.variance(), 12, 4000);
    for (std::size_t h = 0; h <= 12; ++h) {
      CHECK(got(h) == doctest::Approx(want[h]).epsilon(1e-10).scale(want[0]));
    }
  }
}

TEST_CASE("autocovariance needs a finite-variance stationary model") {
  CHECK_THROWS_AS(theoretical_autocov(ArModel(vec({0.3}), InnovationFamily::student_t(2.0)), 3), InvalidInput);
  CHECK_THROWS_AS(theoretical_autocov(ArModel(vec({1.1}), InnovationFamily::gaussian()), 3), ModelError);
}

TEST_CASE("toeplitz layout") {
  AutocovKernel k{{3.0, 2.0, 1.0}};
  const Eigen::MatrixXd t = k.toeplitz();
  Eigen::MatrixXd want(3, 3);
  want << 3, 2, 1, 2, 3, 2, 1, 2, 3;
  CHECK(t == want);
}

TEST_CASE("sample autocovariance by hand") {
  const TimeSeries x({1.0, 2.0, 3.0});
  const auto k = sample_autocov(x, 2);
  CHECK(k(0) == doctest::Approx(14.0 / 3.0));
  CHECK(k(1) == doctest::Approx(8.0 / 3.0));
  CHECK(k(2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sample_autocov(x, 3), InvalidInput);
}

TEST_CASE("simulation") {
  const ArModel m(vec({0.2, 0.0, 0.2, 0.0, 0.2}), InnovationFamily::gaussian());
  const TimeSeries a = simulate(m, 500, 100, 3);
  CHECK(a.size() == 500);
  CHECK(a == simulate(m, 500, 100, 3));
  CHECK_FALSE(a == simulate(m, 500, 100, 4));
  CHECK_THROWS_AS(simulate(ArModel(vec({0.7, 0.4}), InnovationFamily::gaussian()), 10, 10, 1), ModelError);
  CHECK_THROWS_AS(simulate(m, 0, 10, 1), InvalidInput);
}

TEST_CASE("long simulations reproduce the stationary moments") {
  const ArModel m(vec({0.2, 0.0, 0.2, 0.0, 0.2}), InnovationFamily::gaussian());
  const TimeSeries x = simulate(m, 200000, kDefaultBurnIn, 21);
  double mean = 0;
  for (double v : x.values()) mean += v;
  mean /= static_cast<double>(x.size());
  CHECK(std::abs(mean) < 0.02);
  const auto theory = theoretical_autocov(m, 5);
  const auto sample = sample_autocov(x, 5);
  for (std::size_t h = 0; h <= 5; ++h) CHECK(sample(h) == doctest::Approx(theory(h)).scale(1.0).epsilon(0.03));
}

TEST_CASE("time series validation") {
  CHECK_THROWS_AS(TimeSeries({}), InvalidInput);
  CHECK_THROWS_AS(TimeSeries({1.0, std::nan("")}), InvalidInput);
  CHECK_THROWS_AS(TimeSeries({1.0, INFINITY}), InvalidInput);
  const TimeSeries x({1, 2, 3, 4, 5});
  CHECK(x.slice(1, 3) == TimeSeries({2, 3, 4}));
  CHECK_THROWS_AS(x.slice(3, 3), InvalidInput);
  CHECK_THROWS_AS(ArModel(Eigen::VectorXd(), InnovationFamily::gaussian()), InvalidInput);
}
