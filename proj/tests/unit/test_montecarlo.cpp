#include <doctest.h>

#include <set>
#include <sstream>

#include "sparse_ar/error.hpp"
#include "sparse_ar/montecarlo.hpp"

using namespace sparse_ar;

namespace {

ExperimentDesign small_design() {
  ExperimentDesign d;
  d.model = CoefficientPattern::fixed({0.2, 0.0, 0.2, 0.0, 0.2});
  d.sample_sizes = {300, 600};
  d.replications = 6;
  d.master_seed = 99;
  MethodSpec mle;
  MethodSpec scad;
  scad.method = FitMethod::kScadPcmle;
  scad.grid.lambdas = TuningGrid::geometric(0.03, 0.12, 4);
  MethodSpec lasso;
  lasso.method = FitMethod::kLassoPcmle;
  lasso.grid.lambdas = TuningGrid::geometric(0.01, 0.1, 4);
  d.methods = {mle, scad, lasso};
  return d;
}

std::string summary_csv(const McSummary& s) {
  std::ostringstream out;
  write_summary_csv(out, s);
  return out.str();
}

}  // namespace

TEST_CASE("seed derivation") {
  CHECK(replication_seed(1, 1000, 0) == replication_seed(1, 1000, 0));
  std::set<std::uint64_t> seen;
  for (std::size_t n : {1000, 2000})
    for (std::size_t r = 0; r < 100; ++r) seen.insert(replication_seed(7, n, r));
  CHECK(seen.size() == 200);
  CHECK(mix_seed(0, 0) != mix_seed(0, 1));
}

TEST_CASE("coefficient patterns") {
  CoefficientPattern p{{0.2, 0.0, 1.0, 0.0, 0.5}, {0.0, 0.0, -0.75, 0.0, -0.75}};
  const Eigen::VectorXd at = p.at(1000);
  CHECK(at(0) == 0.2);
  CHECK(at(2) == doctest::Approx(std::pow(1000.0, -0.75)));
  CHECK(at(4) == doctest::Approx(0.5 * std::pow(1000.0, -0.75)));
  CHECK(p.zero_lags() == std::vector<std::size_t>{2, 4});
}

TEST_CASE("lambda grids can scale with N") {
  MethodSpec m;
  m.method = FitMethod::kScadPcmle;
  m.grid.lambdas = {0.08};
  CHECK(m.grid_for(4000).lambdas == std::vector<double>{0.08});
  m.lambda_exponent = -0.5;
  CHECK(m.grid_for(4000).lambdas[0] == doctest::Approx(0.04));
}

TEST_CASE("a single replication summarizes that fit") {
  ExperimentDesign d = small_design();
  d.replications = 1;
  d.sample_sizes = {400};
  const ExperimentResult res = run_experiment(d, 1);
  const std::uint64_t seed = replication_seed(d.master_seed, 400, 0);
  const TimeSeries x = simulate(ArModel(d.model.at(400), d.innovation), 400, d.burn_in, seed);
  const FitResult fit = tune(x, 5, d.innovation, PenaltyKind::kScad, d.methods[1].grid);
  const CellSummary& cell = res.summary.cell(FitMethod::kScadPcmle, 400);
  CHECK(cell.replications == 1);
  CHECK(cell.median_l2 == (fit.estimates - d.model.at(400)).norm());
  for (const auto& lag : cell.lags) {
    CHECK(lag.zero.trials == 1);
    CHECK(lag.zero.successes == (fit.estimates(static_cast<Eigen::Index>(lag.lag - 1)) == 0.0 ? 1u : 0u));
  }
}

TEST_CASE("MLE never produces exact zeros") {
  const ExperimentResult res = run_experiment(small_design(), 2);
  for (std::size_t n : {300, 600}) {
    const CellSummary& c = res.summary.cell(FitMethod::kMle, n);
    for (const auto& lag : c.lags) CHECK(lag.zero.successes == 0);
    CHECK(c.all_zero.successes == 0);
  }
}

TEST_CASE("summaries are bounded and counted from R replications") {
  const ExperimentDesign d = small_design();
  const ExperimentResult res = run_experiment(d, 3);
  CHECK(res.raw.size() == d.sample_sizes.size() * d.replications * d.methods.size());
  CHECK(res.summary.zero_lags == std::vector<std::size_t>{2, 4});
  for (const auto& c : res.summary.cells) {
    CHECK(c.replications == d.replications);
    for (const auto& lag : c.lags) {
      CHECK(lag.zero.trials == d.replications);
      const auto [lo, hi] = lag.zero.wilson();
      CHECK(lo <= lag.zero.value());
      CHECK(lag.zero.value() <= hi);
      CHECK(lo >= 0.0);
      CHECK(hi <= 1.0);
    }
  }
}

TEST_CASE("results do not depend on the thread count") {
  const ExperimentDesign d = small_design();
  const auto one = run_experiment(d, 1);
  const auto four = run_experiment(d, 4);
  CHECK(summary_csv(one.summary) == summary_csv(four.summary));
  std::ostringstream a, b;
  write_raw_csv(a, one.raw);
  write_raw_csv(b, four.raw);
  CHECK(a.str() == b.str());
}

TEST_CASE("probability curve in long format") {
  const ExperimentResult res = run_experiment(small_design(), 2);
  const auto curve = probability_curve(res.summary);
  std::size_t both = 0;
  for (const auto& pt : curve) both += pt.lag == "both";
  CHECK(both == 6);
  std::ostringstream out;
  write_curve_csv(out, curve);
  CHECK(out.str().rfind("method,n,lag,probability,wilson_low,wilson_high\n", 0) == 0);
}

TEST_CASE("Wilson interval and two-proportion test by hand") {
  const auto [lo, hi] = Proportion{5, 10}.wilson();
  CHECK(lo == doctest::Approx(0.2366).epsilon(1e-3));
  CHECK(hi == doctest::Approx(0.7634).epsilon(1e-3));
  CHECK(Proportion{0, 50}.wilson().second == doctest::Approx(3.8415 / 53.8415).epsilon(1e-3));

  const ProportionTest t = two_proportion_test({60, 100}, {40, 100});
  CHECK(t.z == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(t.p_value == doctest::Approx(std::erfc(2.0)).epsilon(1e-12));
  CHECK(two_proportion_test({0, 100}, {0, 100}).p_value == 1.0);
  CHECK_THROWS_AS(two_proportion_test({0, 0}, {1, 2}), InvalidInput);
}

TEST_CASE("design validation") {
  ExperimentDesign d = small_design();
  d.replications = 0;
  CHECK_THROWS_AS(d.validate(), InvalidInput);
  d = small_design();
  d.methods[1].grid.lambdas.clear();
  CHECK_THROWS_AS(d.validate(), InvalidInput);
  d = small_design();
  d.sample_sizes = {12};
  CHECK_THROWS_AS(d.validate(), InvalidInput);
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) CHECK(std::stod(format_double(x)) == x);
}
