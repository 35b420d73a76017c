#pragma once

#include "pepslab/lattice.hpp"
#include "pepslab/pauli.hpp"

namespace pepslab {

// Couplings of H = g*H_site + lambda*V_bond with g >> lambda > 0 in the
// regime of interest; g sets the intra-site Ising scale, lambda the
// inter-site coupling.
struct HamiltonianParams {
  double g = 1.0;
  double lambda = 0.0;
};

// Intra-site Ising term: -g * sum over sites, intra edges of Z Z.  Boundary
// sites contribute nothing.
WeightedPauliSum build_site_hamiltonian(const GraphSpec& spec, double g = 1.0);

// Bond coupling: for every bond joining qubit a = (mu,i) to b = (nu,j),
//   -lambda * (X_a Z_b + Z_a X_b).
WeightedPauliSum build_bond_hamiltonian(const GraphSpec& spec, double lambda = 1.0);

// g*H_site + lambda*V_bond on the full qubit register.
WeightedPauliSum build_total_hamiltonian(const GraphSpec& spec,
                                         const HamiltonianParams& params);

// The encoded cluster stabilizer of a site: X on every port of the site and
// Z on the bond partner of each port.  Commutes with every intra-site Ising
// term and acts within the logical subspace.
PauliString encoded_stabilizer(const GraphSpec& spec, int site);

// Operators on the logical register (one logical qubit per site, indexed by
// site, little-endian like physical strings).
struct LogicalOperator {
  PauliString op;  // lives on n_sites logical qubits
};

// P_L K_mu P_L: X on the site's logical qubit, Z on each distinct bonded
// neighbour an odd number of bonds away (double bonds cancel).
LogicalOperator logical_stabilizer(const GraphSpec& spec, int site);

// Restriction of an encoded operator to the logical subspace.  The operator
// must commute with every intra-site Ising term (so that full-site X blocks
// and per-site Z parities are well defined); otherwise throws.
LogicalOperator logical_from_encoded(const GraphSpec& spec, const PauliString& op);

// Reference cluster Hamiltonian -delta * sum_mu S_mu on the logical
// register; its unique ground state is the cluster state of the site graph,
// at energy -delta * n_sites with gap 2*delta.
WeightedPauliSum build_cluster_hamiltonian(const GraphSpec& spec, double delta);

}  // namespace pepslab
