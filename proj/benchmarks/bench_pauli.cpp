#include <benchmark/benchmark.h>

#include <pepslab/hamiltonian.hpp>
#include <pepslab/lattice.hpp>
#include <pepslab/pauli.hpp>
#include <pepslab/state.hpp>

namespace {

using namespace pepslab;

// Full-weight string: X on even qubits, Z on odd ones.
PauliString dense_string(std::size_t n_qubits) {
  PauliString op(n_qubits);
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if (q % 2 == 0) {
      op.set_x(q, true);
    } else {
      op.set_z(q, true);
    }
  }
  return op;
}

void BM_PauliApply(benchmark::State& state) {
  const auto n_qubits = static_cast<std::size_t>(state.range(0));
  const PauliString op = dense_string(n_qubits);
  const StateVector in = StateVector::uniform_superposition(n_qubits);
  for (auto _ : state) {
    StateVector out = apply(op, in);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}
BENCHMARK(BM_PauliApply)->Arg(12)->Arg(16)->Arg(20);

void BM_HamiltonianMatvec(benchmark::State& state) {
  const int n_sites = static_cast<int>(state.range(0));
  const GraphSpec spec = build_named("ring", {n_sites});
  const WeightedPauliSum h = build_total_hamiltonian(spec, HamiltonianParams{1.0, 0.1});
  const StateVector in = StateVector::uniform_superposition(spec.n_qubits());
  StateVector out(spec.n_qubits());
  for (auto _ : state) {
    apply_into(h, in, out);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}
BENCHMARK(BM_HamiltonianMatvec)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_StabilizerExpectation(benchmark::State& state) {
  const int n_sites = static_cast<int>(state.range(0));
  const GraphSpec spec = build_named("ring", {n_sites});
  const PauliString k0 = encoded_stabilizer(spec, 0);
  const StateVector in = StateVector::uniform_superposition(spec.n_qubits());
  for (auto _ : state) {
    auto v = expectation(k0, in);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}
BENCHMARK(BM_StabilizerExpectation)->Arg(8)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
