#include <benchmark/benchmark.h>

#include "sparse_ar/estimator.hpp"
#include "sparse_ar/likelihood.hpp"

using namespace sparse_ar;

namespace {

Eigen::VectorXd model8() {
  Eigen::VectorXd phi(5);
  phi << 0.2, 0.0, 0.2, 0.0, 0.2;
  return phi;
}

InnovationFamily family(std::int64_t id) {
  return id == 0 ? InnovationFamily::gaussian() : InnovationFamily::student_t(5.0);
}

void BM_LogLikGradient(benchmark::State& state) {
  const auto innov = family(state.range(1));
  const TimeSeries x = simulate(ArModel(model8(), innov), static_cast<std::size_t>(state.range(0)), kDefaultBurnIn, 1);
  const ConditionalLikelihood ctx(x, 5, innov);
  const Eigen::VectorXd theta = model8();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctx.log_lik(theta));
    benchmark::DoNotOptimize(ctx.gradient(theta));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogLikGradient)->ArgsProduct({{1000, 4000}, {0, 1}});

void BM_FitPcmle(benchmark::State& state) {
  const auto innov = family(state.range(1));
  const TimeSeries x = simulate(ArModel(model8(), innov), static_cast<std::size_t>(state.range(0)), kDefaultBurnIn, 2);
  const auto pen = PenaltySpec::scad(0.08, 2.1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_pcmle(x, 5, innov, pen));
}
BENCHMARK(BM_FitPcmle)->ArgsProduct({{1000, 4000}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_Tune(benchmark::State& state) {
  const auto innov = family(state.range(0));
  const TimeSeries x = simulate(ArModel(model8(), innov), 1000, kDefaultBurnIn, 3);
  TuningGrid grid;
  grid.lambdas = TuningGrid::geometric(0.025, 0.095, 10);
  for (auto _ : state) benchmark::DoNotOptimize(tune(x, 5, innov, PenaltyKind::kScad, grid));
}
BENCHMARK(BM_Tune)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LongOrderTune(benchmark::State& state) {
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(24);
  truth(1) = 0.15;
  truth(23) = 0.25;
  const TimeSeries x = simulate(ArModel(truth, InnovationFamily::gaussian()), 800, kDefaultBurnIn, 4);
  TuningGrid grid;
  grid.lambdas = TuningGrid::geometric(0.01, 0.1, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tune(x, static_cast<std::size_t>(state.range(0)), InnovationFamily::gaussian(), PenaltyKind::kScad, grid));
  }
}
BENCHMARK(BM_LongOrderTune)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
