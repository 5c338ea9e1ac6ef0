#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "sparse_ar/error.hpp"
#include "sparse_ar/innovations.hpp"

using namespace sparse_ar;

TEST_CASE("log densities agree with Boost.Math pdfs") {
  const auto g = InnovationFamily::gaussian(1.7);
  const boost::math::normal_distribution<double> normal(0.0, 1.7);
  for (double z : {-6.0, -1.3, 0.0, 0.4, 2.9}) {
    CHECK(g.log_density(z) == doctest::Approx(std::log(boost::math::pdf(normal, z))).epsilon(1e-13));
  }
  for (double df : {1.0, 2.0, 3.5, 5.0, 30.0}) {
    const auto t = InnovationFamily::student_t(df);
    const boost::math::students_t_distribution<double> ref(df);
    for (double z : {-8.0, -0.7, 0.0, 1.1, 4.0}) {
      CHECK(t.log_density(z) == doctest::Approx(std::log(boost::math::pdf(ref, z))).epsilon(1e-12));
    }
  }
}

TEST_CASE("densities integrate to one") {
  for (const auto& f : {InnovationFamily::gaussian(0.5), InnovationFamily::student_t(2.0), InnovationFamily::student_t(5.0)}) {
    const double mass = integrate_real_line([&](double z) { return std::exp(f.log_density(z)); });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("score and its derivative match finite differences") {
  const double h = 1e-5;
  for (const auto& f : {InnovationFamily::gaussian(1.3), InnovationFamily::student_t(2.0), InnovationFamily::student_t(5.0)}) {
    for (double z : {-3.2, -0.4, 0.25, 1.9, 7.0}) {
      const double fd_score = (f.log_density(z + h) - f.log_density(z - h)) / (2 * h);
      const double fd_curv = (f.score(z + h) - f.score(z - h)) / (2 * h);
      CHECK(f.score(z) == doctest::Approx(fd_score).epsilon(1e-7));
      CHECK(f.score_derivative(z) == doctest::Approx(fd_curv).epsilon(1e-7));
    }
  }
}

TEST_CASE("information constant") {
  CHECK(InnovationFamily::gaussian(1.0).information_constant() == 1.0);
  CHECK(InnovationFamily::gaussian(2.0).information_constant() == doctest::Approx(0.25).epsilon(1e-15));
  // E[(g'/g)^2] for the raw t(df) law is (df + 1) / (df + 3).
  for (double df : {1.0, 2.0, 5.0, 12.0}) {
    CHECK(InnovationFamily::student_t(df).information_constant() ==
          doctest::Approx((df + 1) / (df + 3)).epsilon(1e-9));
  }
}

TEST_CASE("moments and regularity flags") {
  CHECK(InnovationFamily::gaussian(3.0).variance() == 9.0);
  CHECK(InnovationFamily::student_t(5.0).variance() == doctest::Approx(5.0 / 3.0));
  CHECK(std::isinf(InnovationFamily::student_t(2.0).variance()));
  CHECK_FALSE(InnovationFamily::student_t(1.5).has_finite_variance());
  CHECK(InnovationFamily::gaussian().satisfies_assumptions_2());
  CHECK(InnovationFamily::student_t(5.0).satisfies_assumptions_2());
  CHECK_FALSE(InnovationFamily::student_t(4.0).satisfies_assumptions_2());
  CHECK_FALSE(InnovationFamily::student_t(2.0).satisfies_assumptions_2());
}

TEST_CASE("sampling is reproducible and roughly calibrated") {
  const auto t5 = InnovationFamily::student_t(5.0);
  CHECK(t5.sample(100, 9) == t5.sample(100, 9));
  CHECK(t5.sample(100, 9) != t5.sample(100, 10));

  const auto draws = t5.sample(200000, 4);
  double mean = 0, sq = 0;
  for (double z : draws) {
    mean += z;
    sq += z * z;
  }
  mean /= static_cast<double>(draws.size());
  sq /= static_cast<double>(draws.size());
  CHECK(std::abs(mean) < 0.015);
  // sd of the sample variance is about 0.011 here
  CHECK(sq == doctest::Approx(5.0 / 3.0).epsilon(0.04));
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(InnovationFamily::gaussian(0.0), InvalidInput);
  CHECK_THROWS_AS(InnovationFamily::gaussian(-1.0), InvalidInput);
  CHECK_THROWS_AS(InnovationFamily::student_t(0.0), InvalidInput);
  CHECK_THROWS_AS(InnovationFamily::student_t(std::nan("")), InvalidInput);
  CHECK_THROWS_AS(InnovationFamily::gaussian().log_density(std::nan("")), InvalidInput);
  CHECK_THROWS_AS(InnovationFamily::gaussian().df(), InvalidInput);
  CHECK_THROWS_AS(InnovationFamily::student_t(3.0).sigma(), InvalidInput);
}
