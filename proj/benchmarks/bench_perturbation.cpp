#include <benchmark/benchmark.h>

#include <cstdint>

#include <pepslab/lattice.hpp>
#include <pepslab/perturbation.hpp>

namespace {

using namespace pepslab;

void BM_SiteEnergySeries(benchmark::State& state) {
  const int coordination = static_cast<int>(state.range(0));
  SiteSpec site;
  site.coordination = coordination;
  site.intra_edges = default_intra_edges(coordination);
  for (auto _ : state) {
    std::uint64_t used = 0;
    auto series = site_energy_series(site, kMaxExpansionOrder, kDefaultPathBudget, used);
    benchmark::DoNotOptimize(series);
  }
}
BENCHMARK(BM_SiteEnergySeries)->Arg(2)->Arg(3)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_EffectiveOperator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GraphSpec spec = build_named("square", {n, n});
  for (auto _ : state) {
    EffectiveExpansion expansion = effective_operator(spec, 4);
    benchmark::DoNotOptimize(expansion);
  }
  state.counters["sites"] = static_cast<double>(spec.n_sites());
}
BENCHMARK(BM_EffectiveOperator)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_EigenvalueSeries(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GraphSpec spec = build_named("square", {n, n});
  const EffectiveExpansion expansion = effective_operator(spec, 4);
  ZErrorConfig config;
  for (int v = 0; v < n; ++v) config.flipped_sites.push_back(v * (n + 1));
  for (auto _ : state) {
    auto series = eigenvalue_series(expansion, config);
    benchmark::DoNotOptimize(series);
  }
}
BENCHMARK(BM_EigenvalueSeries)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
