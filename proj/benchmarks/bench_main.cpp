#include <benchmark/benchmark.h>

#include "polyrecon/fixtures.hpp"
#include "polyrecon/fourier.hpp"
#include "polyrecon/quadrature.hpp"
#include "polyrecon/reconstruct.hpp"
#include "polyrecon/scan.hpp"

using namespace polyrecon;

namespace {

Vec direction(int dim, double magnitude) {
  Vec s(dim);
  for (int i = 0; i < dim; ++i) s(i) = 0.3 + 0.2 * i;
  return magnitude * s.normalized();
}

void BM_FtPolygon(benchmark::State& state) {
  const Polytope p = fixtures::hexagon();
  const Vec s = direction(2, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ft_polygon_2d(p, s));
}
BENCHMARK(BM_FtPolygon)->Arg(1)->Arg(100)->Arg(10000);

void BM_FtPolytope3d(benchmark::State& state) {
  const Polytope p = fixtures::deformed_octahedron();
  const Vec s = direction(3, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ft_polytope_3d(p, s));
}
BENCHMARK(BM_FtPolytope3d)->Arg(1)->Arg(100)->Arg(10000);

void BM_Evaluator3d(benchmark::State& state) {
  const TransformEvaluator eval(fixtures::deformed_octahedron());
  const Eigen::Vector3d s = direction(3, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval.evaluate3(s));
}
BENCHMARK(BM_Evaluator3d);

void BM_Quadrature(benchmark::State& state) {
  const Simplex simplex = fixtures::random_simplex(static_cast<int>(state.range(0)), 3);
  const Vec s = direction(simplex.dim(), static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(ft_simplex_quadrature(simplex, s, 1e-8));
}
BENCHMARK(BM_Quadrature)
    ->Args({2, 100})->Args({2, 10000})
    ->Args({3, 100})->Args({3, 10000})
    ->Args({4, 100})
    ->Unit(benchmark::kMillisecond);

void BM_SimulateHemisphere(benchmark::State& state) {
  const Polytope p = fixtures::deformed_octahedron();
  const auto surface = ScanSurface::hemisphere();
  const int n = static_cast<int>(state.range(0));
  const Grid grid = Grid::over(surface, {n, n});
  ScanOptions options;
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_pattern(p, surface, grid, 0.01, options));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_SimulateHemisphere)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ResolveSigns(benchmark::State& state) {
  const auto set = indicator_set(fixtures::random_polytope_3d(static_cast<int>(state.range(0)), 2));
  for (auto _ : state) benchmark::DoNotOptimize(resolve_signs(set, 1e-9));
}
BENCHMARK(BM_ResolveSigns)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Fit3d(benchmark::State& state) {
  const EGI egi = egi_of(fixtures::deformed_octahedron());
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_polytope_3d(egi));
}
BENCHMARK(BM_Fit3d)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
