#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "mgap/ar1.hpp"
#include "mgap/innovations.hpp"
#include "mgap/kriging.hpp"
#include "mgap/moment_gap.hpp"
#include "mgap/rng.hpp"
#include "mgap/stats.hpp"
#include "mgap/summation.hpp"
#include "mgap/ui_diagnostics.hpp"

namespace {

void BM_NormalDraw(benchmark::State& state) {
  mgap::RandomStream stream({1, 0, 0});
  for (auto _ : state) benchmark::DoNotOptimize(stream.normal());
}
BENCHMARK(BM_NormalDraw);

void BM_PairwiseSum(benchmark::State& state) {
  mgap::RandomStream stream({2, 0, 0});
  std::vector<double> values(static_cast<std::size_t>(state.range(0)));
  for (double& v : values) v = stream.normal();
  for (auto _ : state) benchmark::DoNotOptimize(mgap::pairwise_sum(values));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PairwiseSum)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);

mgap::Ar1Config bench_ar1() {
  mgap::Ar1Config config;
  config.rho = 0.5;
  config.mu = 1.0;
  config.innovation = mgap::InnovationSpec::gaussian(1.0);
  config.uncertainty_rule = mgap::UncertaintyRule::inverse_index();
  config.truncation_rule = mgap::TruncationRule::ceil_log2_times(2.0);
  return config;
}

void BM_SimulatePair(benchmark::State& state) {
  const mgap::Ar1Config config = bench_ar1();
  const long n = state.range(0);
  for (auto _ : state) {
    const auto sample = mgap::simulate_pair(config, n, 100, {3, 0, 0});
    benchmark::DoNotOptimize(sample.x.data());
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SimulatePair)->Arg(100)->Arg(1000)->Arg(10000);

void BM_GapRow(benchmark::State& state) {
  mgap::RandomStream stream({4, 0, 0});
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = stream.normal();
    y[i] = x[i] + 0.01 * stream.normal();
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(mgap::gap_row(100, x, y, 1.0).gap_lr);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GapRow)->Arg(1 << 12)->Arg(1 << 16);

void BM_TailFunctional(benchmark::State& state) {
  mgap::RandomStream stream({5, 0, 0});
  std::vector<std::vector<double>> samples(1);
  samples[0].resize(static_cast<std::size_t>(state.range(0)));
  for (double& v : samples[0]) v = stream.normal();
  const std::vector<double> a_grid = {0.5, 1.0, 2.0, 4.0, 8.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        mgap::tail_functional(samples, 1.0, a_grid).values[0][0]);
}
BENCHMARK(BM_TailFunctional)->Arg(1 << 14)->Arg(1 << 18);

void BM_KsStatistic(benchmark::State& state) {
  mgap::RandomStream stream({6, 0, 0});
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(m), b(m);
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = stream.normal();
    b[i] = stream.normal();
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(mgap::two_sample_ks_statistic(a, b));
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(BM_KsStatistic)->Arg(1 << 10)->Arg(1 << 14);

void BM_KrigingFit(benchmark::State& state) {
  const long n = state.range(0);
  Eigen::MatrixXd design(n, 1);
  Eigen::VectorXd responses(n);
  for (long i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    design(i, 0) = x;
    responses(i) = std::sin(2.0 * std::numbers::pi * x);
  }
  mgap::KrigingConfig config;
  config.lengthscales = {0.3};
  for (auto _ : state) {
    const auto model = mgap::KrigingModel::fit(design, responses, config);
    benchmark::DoNotOptimize(model.process_variance());
  }
}
BENCHMARK(BM_KrigingFit)->Arg(16)->Arg(64)->Arg(256);

void BM_KrigingPredict(benchmark::State& state) {
  const long n = 64;
  Eigen::MatrixXd design(n, 1);
  Eigen::VectorXd responses(n);
  for (long i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    design(i, 0) = x;
    responses(i) = std::sin(2.0 * std::numbers::pi * x);
  }
  mgap::KrigingConfig config;
  config.lengthscales = {0.3};
  const auto model = mgap::KrigingModel::fit(design, responses, config);
  Eigen::VectorXd point(1);
  point << 0.37;
  for (auto _ : state)
    benchmark::DoNotOptimize(model.predict(point).mean);
}
BENCHMARK(BM_KrigingPredict);

}  // namespace

BENCHMARK_MAIN();
