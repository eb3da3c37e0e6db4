#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "ql/plane_slice.hpp"
#include "ql/surface.hpp"
#include "ql/torus4.hpp"
#include "ql/trace.hpp"
#include "ql/trig_series.hpp"

namespace {

using namespace ql;

const Eigen::Vector3d kB(1.0, std::sqrt(2.0), std::sqrt(3.0));

static void BM_Evaluate3(benchmark::State& state) {
  TrigSeries f = TrigSeries::cos_sum(3);
  Eigen::Vector3d x(0.1, 0.2, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.evaluate3(x));
    x[0] += 1e-3;
  }
}
BENCHMARK(BM_Evaluate3);

static void BM_Gradient3(benchmark::State& state) {
  TrigSeries f = TrigSeries::cos_sum(3);
  Eigen::Vector3d x(0.1, 0.2, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.gradient3(x));
    x[1] += 1e-3;
  }
}
BENCHMARK(BM_Gradient3);

static void BM_GridValues(benchmark::State& state) {
  TrigSeries f = TrigSeries::cos_sum(3);
  QuasiperiodicFunction qp2 =
      slice_function(f, PlaneSlice::from_normal3(kB, 0.0));
  int count = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        qp2.grid_values(Eigen::Vector2d(-3, -3), 6.0 / count, count));
  state.SetItemsProcessed(state.iterations() * count * count);
}
BENCHMARK(BM_GridValues)->Arg(64)->Arg(256);

static void BM_TraceLevel(benchmark::State& state) {
  TrigSeries f = TrigSeries::cos_sum(3);
  QuasiperiodicFunction qp2 =
      slice_function(f, PlaneSlice::from_normal3(kB, 0.1));
  double window = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(trace_level(qp2, 0.1, window, 1.0 / 16));
}
BENCHMARK(BM_TraceLevel)->Arg(3)->Arg(6);

static void BM_ExtractSurface(benchmark::State& state) {
  TrigSeries f = TrigSeries::cos_sum(3);
  std::vector<double> crit = critical_values(f);
  int res = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(extract_level_surface(f, 0.1, res, &crit));
}
BENCHMARK(BM_ExtractSurface)->Arg(12)->Arg(20);

static void BM_SliceSeries(benchmark::State& state) {
  TrigSeries f(4);
  f.add_cos({0, 1, 0, 0}, 1.0);
  f.add_cos({0, 0, 1, 0}, 1.0);
  f.add_cos({0, 0, 0, 1}, 1.0);
  f.add_cos({1, 1, 0, 0}, 0.05);
  DirectionPair dp = make_direction_pair(
      Eigen::Vector4i(1, 0, 0, 0),
      Eigen::Vector4d(0.3, 1.0, 0.2 * std::sqrt(2.0), 0.2 * std::sqrt(3.0)));
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(slice_series(f, dp, t));
    t += 1e-2;
  }
}
BENCHMARK(BM_SliceSeries);

}  // namespace

BENCHMARK_MAIN();
