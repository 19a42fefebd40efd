#include <benchmark/benchmark.h>

#include "harmsurf/gallery.hpp"

using namespace harmsurf;

namespace {

const FamilyInstance& genus_two() {
  static const FamilyInstance inst = build_family(FamilySpec::defaults(FamilyKind::genus_two_ends));
  return inst;
}

void BM_Tessellate(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const int resolution = static_cast<int>(state.range(1));
  const FamilyInstance& inst = genus_two();
  for (auto _ : state) benchmark::DoNotOptimize(tessellate(inst, resolution, 1e-2, parallel));
  state.SetLabel(parallel ? "openmp" : "serial");
}
BENCHMARK(BM_Tessellate)->ArgsProduct({{0, 1}, {32, 64}})->Unit(benchmark::kMillisecond);

void BM_AssembleSystem(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const PeriodSystem sys = build_genus_two_ends({0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
  const QuadratureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(sys, cfg, parallel));
  state.SetLabel(parallel ? "openmp" : "serial");
}
BENCHMARK(BM_AssembleSystem)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
