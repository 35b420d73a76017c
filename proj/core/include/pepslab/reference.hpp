#pragma once

#include <string>
#include <vector>

#include "pepslab/hamiltonian.hpp"

namespace pepslab {

// Version tag for the embedded table of published values, recorded in
// experiment summaries so reported deviations stay auditable.
inline constexpr const char* kReferenceTableVersion = "1";

// One published constant: a series coefficient (units lambda^k/g^{k-1}
// where an order is part of the quantity name), a gap-law parameter, or a
// fidelity-bound constant, keyed by lattice family.
struct ReferenceEntry {
  std::string family;    // ring | line | hex | square | square-fixed | cubic
  std::string quantity;
  double value;
  std::string note;
};

const std::vector<ReferenceEntry>& reference_table();

bool has_reference(const std::string& family, const std::string& quantity);

// NaN when the table has no entry.
double reference_value(const std::string& family, const std::string& quantity);

// Published cluster-state fidelity against the exact ground state, where the
// source gives one (the 1D ring); NaN otherwise.
double paper_cluster_fidelity(const std::string& family, std::size_t n_sites,
                              const HamiltonianParams& params);

}  // namespace pepslab
