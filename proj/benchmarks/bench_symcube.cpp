#include <benchmark/benchmark.h>

#include "symcube/compose.hpp"
#include "symcube/smolyak.hpp"
#include "symcube/sphere.hpp"
#include "symcube/verify.hpp"

using namespace symcube;

namespace {

void BM_CombineSmolyak(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const KnotLadder ladder = default_ladder(Weight1D::gaussian(), 4, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(combine(SmolyakPlan(d + 2, d, ladder)));
  state.counters["dim"] = d;
}
BENCHMARK(BM_CombineSmolyak)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_BuildDegree5(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::size_t knots = 0;
  for (auto _ : state) {
    const CubatureFormula rule = build_deg5(Weight1D::lebesgue(), d);
    knots = rule.size();
    benchmark::DoNotOptimize(knots);
  }
  state.counters["knots"] = static_cast<double>(knots);
}
BENCHMARK(BM_BuildDegree5)->Arg(10)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_BuildDegree7(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::size_t knots = 0;
  for (auto _ : state) {
    const CubatureFormula rule = build_deg7(Weight1D::gaussian(), d);
    knots = rule.size();
    benchmark::DoNotOptimize(knots);
  }
  state.counters["knots"] = static_cast<double>(knots);
}
BENCHMARK(BM_BuildDegree7)->Arg(10)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Exactness(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const CubatureFormula rule = build_deg5(Weight1D::gaussian(), d);
  for (auto _ : state) benchmark::DoNotOptimize(exactness(rule, 5).passed);
}
BENCHMARK(BM_Exactness)->Arg(6)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_ExactnessFullSweep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const CubatureFormula rule = build_deg5(Weight1D::gaussian(), d);
  ExactnessOptions options;
  options.use_symmetry = false;
  for (auto _ : state) benchmark::DoNotOptimize(exactness(rule, 5, options).passed);
}
BENCHMARK(BM_ExactnessFullSweep)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_MergeKnots(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const CubatureFormula rule = build_deg7(Weight1D::lebesgue(), d);
  CubatureFormula doubled{PointSet(rule.dim()), {}, rule.degree, rule.target, rule.provenance};
  for (int copy = 0; copy < 2; ++copy) {
    for (std::size_t i = 0; i < rule.size(); ++i) doubled.add(rule.points[i], rule.weights[i] / 2);
  }
  for (auto _ : state) benchmark::DoNotOptimize(merge_knots(doubled).size());
  state.counters["input"] = static_cast<double>(doubled.size());
}
BENCHMARK(BM_MergeKnots)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_ProjectedSphere(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(projected_smolyak_sphere(d, 2, 1.0).size());
}
BENCHMARK(BM_ProjectedSphere)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
