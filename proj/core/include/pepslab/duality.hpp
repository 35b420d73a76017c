#pragma once

#include <cstdint>
#include <vector>

#include "pepslab/hamiltonian.hpp"
#include "pepslab/lattice.hpp"
#include "pepslab/pauli.hpp"

namespace pepslab {

// Conjugation by the product of CSIGN (controlled-Z) gates over all bonds.
// Exact on the symplectic data: per bond (a, b),
//   X_a -> X_a Z_b,  X_b -> Z_a X_b,  Z unchanged,
// with a -1 when both qubits carry X.  Bonds touch disjoint qubit pairs, so
// the per-bond updates commute; the transform is an involution.
PauliString csign_conjugate(const PauliString& op, const GraphSpec& spec);
WeightedPauliSum csign_conjugate(const WeightedPauliSum& op, const GraphSpec& spec);

// The image of the full Hamiltonian under the bond CSIGN circuit, built
// directly: per site, -g Z Z over intra edges and -lambda X on every port.
// Sites decouple, which is what makes large lattices tractable.
WeightedPauliSum build_dual_hamiltonian(const GraphSpec& spec,
                                        const HamiltonianParams& params);

// Exact multiset equality of Pauli terms (after coefficient merging).
bool same_terms(const WeightedPauliSum& a, const WeightedPauliSum& b,
                double coeff_tol = 0.0);

// One decoupled site of the dual picture: the 2^c-dimensional transverse
// field Ising model -g sum_{intra} Z Z - lambda sum_ports X.  Eigenvalues in
// long double: splittings at small lambda/g sit close to the double-epsilon
// floor of the total energy scale.
struct SiteDualModel {
  int site = -1;
  int dim = 0;
  std::vector<long double> eigenvalues;     // ascending, all 2^c
  std::vector<long double> ground_vector;   // real symmetric ground eigenvector
  long double ground_energy() const { return eigenvalues.front(); }
  // Energy cost of the first level above the ground level; for lambda > 0
  // the ground state is unique and this is the site excitation gap.
  long double gap() const;
};

SiteDualModel solve_site_model(const SiteSpec& site, const HamiltonianParams& params);
std::vector<SiteDualModel> site_dual_models(const GraphSpec& spec,
                                            const HamiltonianParams& params,
                                            int threads = 1);

// Excitation gap of a single site's dual model.
long double site_gap(const SiteSpec& site, const HamiltonianParams& params);

// k lowest total energies (with multiplicity) of the decoupled site models,
// merged best-first across the per-site sorted spectra.
std::vector<long double> compose_spectrum(const std::vector<SiteDualModel>& models,
                                          std::size_t k);

}  // namespace pepslab
