#include "pepslab/hamiltonian.hpp"

#include <stdexcept>

namespace pepslab {

WeightedPauliSum build_site_hamiltonian(const GraphSpec& spec, double g) {
  QubitIndexMap map(spec);
  WeightedPauliSum h(map.total());
  for (std::size_t mu = 0; mu < spec.sites.size(); ++mu) {
    const SiteSpec& s = spec.sites[mu];
    for (const auto& [a, b] : s.intra_edges) {
      PauliString zz(map.total());
      zz.set_z(map.index(static_cast<int>(mu), a), true);
      zz.set_z(map.index(static_cast<int>(mu), b), true);
      h.add_term(-g, zz);
    }
  }
  return h;
}

WeightedPauliSum build_bond_hamiltonian(const GraphSpec& spec, double lambda) {
  QubitIndexMap map(spec);
  WeightedPauliSum v(map.total());
  for (const Bond& b : spec.bonds) {
    std::size_t qa = map.index(b.site_a, b.port_a);
    std::size_t qb = map.index(b.site_b, b.port_b);

    PauliString xz(map.total());
    xz.set_x(qa, true);
    xz.set_z(qb, true);
    v.add_term(-lambda, xz);

    PauliString zx(map.total());
    zx.set_z(qa, true);
    zx.set_x(qb, true);
    v.add_term(-lambda, zx);
  }
  return v;
}

WeightedPauliSum build_total_hamiltonian(const GraphSpec& spec,
                                         const HamiltonianParams& params) {
  WeightedPauliSum h = build_site_hamiltonian(spec, params.g);
  h.add(build_bond_hamiltonian(spec, params.lambda));
  return h;
}

PauliString encoded_stabilizer(const GraphSpec& spec, int site) {
  if (site < 0 || static_cast<std::size_t>(site) >= spec.sites.size()) {
    throw std::out_of_range("encoded_stabilizer: site out of range");
  }
  QubitIndexMap map(spec);
  std::vector<std::size_t> partner = bond_partner_table(spec, map);
  PauliString k(map.total());
  for (int port = 0; port < spec.sites[static_cast<std::size_t>(site)].coordination; ++port) {
    std::size_t q = map.index(site, port);
    k.set_x(q, true);
    std::size_t p = partner[q];
    if (p >= map.total()) {
      throw std::invalid_argument("encoded_stabilizer: site has a dangling port");
    }
    // A double bond to the same neighbour lands Z on two distinct ports.
    k.set_z(p, !k.z_bit(p));
  }
  return k;
}

LogicalOperator logical_stabilizer(const GraphSpec& spec, int site) {
  return logical_from_encoded(spec, encoded_stabilizer(spec, site));
}

LogicalOperator logical_from_encoded(const GraphSpec& spec, const PauliString& op) {
  QubitIndexMap map(spec);
  if (op.n_qubits() != map.total()) {
    throw std::invalid_argument("logical_from_encoded: operator size mismatch");
  }
  PauliString logical(spec.n_sites());
  int extra_phase = op.phase_power();
  for (std::size_t mu = 0; mu < spec.sites.size(); ++mu) {
    const SiteSpec& s = spec.sites[mu];
    int x_count = 0;
    int z_count = 0;
    for (int port = 0; port < s.coordination; ++port) {
      std::size_t q = map.index(static_cast<int>(mu), port);
      x_count += op.x_bit(q) ? 1 : 0;
      z_count += op.z_bit(q) ? 1 : 0;
    }
    // X on a proper subset of a site's ports flips it out of the aligned
    // subspace: the restriction P_L K P_L vanishes and K was not logical.
    if (x_count != 0 && x_count != s.coordination) {
      throw std::invalid_argument(
          "logical_from_encoded: operator flips a proper subset of site " +
          std::to_string(mu) + "; it does not preserve the logical subspace");
    }
    bool x_l = x_count == s.coordination;
    bool z_l = (z_count % 2) != 0;
    logical.set_x(mu, x_l);
    logical.set_z(mu, z_l);
    // On aligned states Z^{z_count} acts as (logical Z)^{z_count}; the even
    // part is identity with no sign.  X^{x}Z^{z} ordering within the site is
    // already canonical on both sides, so only the stored i^k phase and the
    // canonical-form bookkeeping of the logical string remain.
  }
  // The physical operator i^k X^x Z^z restricted to aligned states equals
  // i^k X^{x_L} Z^{z_L} on site labels; the logical PauliString constructor
  // tracks its own canonical phase, so transfer k directly.
  LogicalOperator out{PauliString::from_masks(spec.n_sites(), logical.x_words(),
                                              logical.z_words(), extra_phase)};
  return out;
}

WeightedPauliSum build_cluster_hamiltonian(const GraphSpec& spec, double delta) {
  WeightedPauliSum h(spec.n_sites());
  for (std::size_t mu = 0; mu < spec.sites.size(); ++mu) {
    h.add_term(-delta, logical_stabilizer(spec, static_cast<int>(mu)).op);
  }
  return h;
}

}  // namespace pepslab
