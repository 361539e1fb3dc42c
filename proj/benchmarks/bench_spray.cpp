#include <benchmark/benchmark.h>

#include "finslab/classify.hpp"
#include "finslab/constructions.hpp"

using namespace finslab;

namespace {

const alphabeta::AlphaBetaMetric& example() {
  static const alphabeta::AlphaBetaMetric M = constructions::example_metric(
      1.0, 1.0, Vec::Unit(3, 0), 2.0, constructions::EtaProfile::one_plus_square());
  return M;
}

const Vec kX = Eigen::Vector3d(0.1, -0.2, 0.15);
const Vec kY = Eigen::Vector3d(1.0, 0.3, -0.2);

void BM_SprayClosed(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(alphabeta::spray_full(example(), kX, kY));
}
BENCHMARK(BM_SprayClosed);

// Point data shared across directions, as the classifiers do.
void BM_SprayClosedCached(benchmark::State& state) {
  const alphabeta::PointData pd = alphabeta::point_data(example(), kX);
  for (auto _ : state) benchmark::DoNotOptimize(alphabeta::spray_full(example(), pd, kY));
}
BENCHMARK(BM_SprayClosedCached);

void BM_SprayDefinitional(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(alphabeta::spray_generic(example(), kX, kY));
}
BENCHMARK(BM_SprayDefinitional);

void BM_DouglasResidual(benchmark::State& state) {
  const classify::ProbeSet P =
      classify::make_probe_set(example(), kX, {.count = static_cast<std::size_t>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(classify::douglas_residual(example(), P));
}
BENCHMARK(BM_DouglasResidual)->Arg(40)->Arg(160);

void BM_HamelResidual(benchmark::State& state) {
  const classify::ProbeSet P = classify::make_probe_set(example(), kX, {});
  for (auto _ : state) benchmark::DoNotOptimize(classify::hamel_residual(example(), P));
}
BENCHMARK(BM_HamelResidual);

}  // namespace
BENCHMARK_MAIN();
