#include <benchmark/benchmark.h>

#include <pepslab/duality.hpp>
#include <pepslab/hamiltonian.hpp>
#include <pepslab/lattice.hpp>
#include <pepslab/spectral.hpp>

namespace {

using namespace pepslab;

void BM_SolveSiteModel(benchmark::State& state) {
  const int coordination = static_cast<int>(state.range(0));
  SiteSpec site;
  site.coordination = coordination;
  site.intra_edges = default_intra_edges(coordination);
  const HamiltonianParams params{1.0, 0.05};
  for (auto _ : state) {
    SiteDualModel model = solve_site_model(site, params);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_SolveSiteModel)->Arg(2)->Arg(3)->Arg(4)->Arg(6);

void BM_ComposeSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GraphSpec spec = build_named("square", {n, n});
  const auto models = site_dual_models(spec, HamiltonianParams{1.0, 0.1});
  for (auto _ : state) {
    auto energies = compose_spectrum(models, 32);
    benchmark::DoNotOptimize(energies);
  }
}
BENCHMARK(BM_ComposeSpectrum)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_LowSpectrum(benchmark::State& state) {
  const int n_sites = static_cast<int>(state.range(0));
  const GraphSpec spec = build_named("ring", {n_sites});
  const WeightedPauliSum h = build_total_hamiltonian(spec, HamiltonianParams{1.0, 0.1});
  int matvecs = 0;
  for (auto _ : state) {
    SpectrumReport report = low_spectrum(h, 4, false);
    matvecs = report.matvec_count;
    benchmark::DoNotOptimize(report);
  }
  state.counters["matvecs"] = static_cast<double>(matvecs);
}
BENCHMARK(BM_LowSpectrum)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
