#include "pepslab/reference.hpp"

#include <cmath>
#include <limits>

namespace pepslab {

const std::vector<ReferenceEntry>& reference_table() {
  static const std::vector<ReferenceEntry> table = {
      // 1D ring, coordination 2.
      {"ring", "theta2_identity_per_site", -1.0, "theta^(2) = (2 N_S + 2 sum S)/(-2g)"},
      {"ring", "theta2_stabilizer_per_site", -1.0, "theta^(2) = (2 N_S + 2 sum S)/(-2g)"},
      {"ring", "E2_per_site", -2.0, "E^(2) on |C> = -2 N_S lambda^2/g"},
      {"ring", "gap_order", 2.0, "Delta ~ (lambda/g)^c with c = 2"},
      {"ring", "gap_coeff", 2.0, "Delta ~ 2 lambda^2/g"},
      {"ring", "fidelity_bound_k", 1.0, "d > 1/(1 + lambda^2/g^2)"},

      // Fixed-boundary line: interior sites share the ring site class.
      {"line", "theta1_boundary_stabilizer", -1.0, "theta^(1) = -(S_B1 + S_B2)"},
      {"line", "E1_per_boundary", -1.0, "boundary term -2 lambda for two ends"},
      {"line", "theta2_identity_per_site", -1.0, "interior sites as on the ring"},
      {"line", "theta2_stabilizer_per_site", -1.0, "interior sites as on the ring"},
      {"line", "E2_per_site", -2.0, "E on |C> = -g N_S - 2 lambda - 2 N_S lambda^2/g"},
      {"line", "gap_order", 2.0, "interior error, Delta_I = 2 lambda^2/g"},
      {"line", "gap_coeff", 2.0, "interior error, Delta_I = 2 lambda^2/g"},
      {"line", "boundary_gap_coeff", 2.0, "boundary error, Delta_B = 2 lambda"},
      {"line", "fidelity_bound_k", 1.0, "d > 1/(1 + lambda^2/g^2)"},

      // Honeycomb, coordination 3.
      {"hex", "theta2_identity_per_site", -0.75, "E0^(2) = -3 N_S lambda^2/(4g)"},
      {"hex", "theta3_stabilizer_per_site", -0.375, "theta^(3) = -(3/8g^2) sum S"},
      {"hex", "E2_per_site", -0.75, "constant shift at second order"},
      {"hex", "E3_per_site", -0.375, "E^(3) on |C> = -(3/8) N_S lambda^3/g^2"},
      {"hex", "gap_order", 3.0, "Delta ~ (lambda/g)^3"},
      {"hex", "gap_coeff", 0.75, "Delta ~ (3/4) lambda^3/g^2"},
      {"hex", "fidelity_bound_k", 3.0 / 16.0, "d > 1/(1 + 3 lambda^2/(4g)^2)"},

      // Square lattice, coordination 4.
      {"square", "theta2_identity_per_site", -1.0, "E0^(2) = -N_S lambda^2/g"},
      {"square", "theta4_identity_per_site", -1.0 / 16.0, "theta^(4) identity part"},
      {"square", "theta4_stabilizer_per_site", -5.0 / 16.0, "theta^(4) = -(5/16g^3) sum S - (N_S/16g^3)"},
      {"square", "E2_per_site", -1.0, "constant shift at second order"},
      {"square", "E4_per_site", -0.375, "E^(4) on |C> = -(3/8) N_S lambda^4/g^3"},
      {"square", "gap_order", 4.0, "Delta ~ (lambda/g)^4"},
      {"square", "gap_coeff", 5.0 / 8.0, "Delta ~ (5/8) lambda^4/g^3"},
      {"square", "fidelity_bound_k", 0.25, "d > 1/(1 + 4 lambda^2/(4g)^2)"},

      // Cubic lattice, coordination 6.
      {"cubic", "theta2_identity_per_site", -0.75, "E0^(2) = -3 N_S lambda^2/(4g)"},
      {"cubic", "theta4_identity_per_site", -1.0 / 256.0, "E0^(4) = -N_S lambda^4/(256 g^3)"},
      {"cubic", "theta6_identity_per_site", -13.0 / 49152.0, "theta^(6) identity part"},
      {"cubic", "theta6_stabilizer_per_site", -83.0 / 16384.0, "theta^(6) stabilizer part"},
      {"cubic", "E2_per_site", -0.75, "constant shift at second order"},
      {"cubic", "E4_per_site", -1.0 / 256.0, "constant shift at fourth order"},
      {"cubic", "E6_per_site", -131.0 / 24576.0, "E^(6) on |C> = -(131/24576) N_S lambda^6/g^5"},
      {"cubic", "gap_order", 6.0, "Delta ~ (lambda/g)^6"},
      {"cubic", "gap_coeff", 83.0 / 8192.0, "Delta = (83/8192) lambda^6/g^5"},
      {"cubic", "fidelity_bound_k", 3.0 / 32.0, "d > 1/(1 + 6 lambda^2/(8g)^2)"},

      // Fixed-boundary square: per-class values, interior c4 / edge c3 /
      // corner c2, from E^(2..4) = -(N_S + 3 sqrt(N_S) + 8) lambda^2/g,
      // -(3 sqrt(N_S)/2) lambda^3/g^2, (-6 N_S - 3 sqrt(N_S) + 128)/16
      // lambda^4/g^3 with 4 sqrt(N_S) edge and 4 corner sites.
      {"square-fixed", "class_c4_E2", -1.0, "interior sites"},
      {"square-fixed", "class_c4_E4", -0.375, "interior sites"},
      {"square-fixed", "class_c3_E2", -0.75, "edge sites"},
      {"square-fixed", "class_c3_E3", -0.375, "edge sites"},
      {"square-fixed", "class_c3_E4", -3.0 / 64.0, "edge sites"},
      {"square-fixed", "class_c2_E2", -2.0, "corner sites"},
      {"square-fixed", "class_c2_E4", 2.0, "corner sites, +128/16 aggregate over 4 corners"},
      {"square-fixed", "delta2_coeff", 0.75, "Delta_2 = 3 lambda^3/(4g^2), edge-site error"},
      {"square-fixed", "delta3_coeff", 5.0 / 8.0, "Delta_3 = 5 lambda^4/(8g^3), interior error"},
      {"square-fixed", "corner_flip_order2", 2.0, "Delta(n_1) second-order slope per corner"},
      {"square-fixed", "corner_flip_order4_paper", 2.0,
       "Delta(n_1) fourth-order slope per corner as published; the exact "
       "c=2 site gap gives -2"},
      {"square-fixed", "gap_order", 2.0, "lowest excitation flips a corner"},
      {"square-fixed", "gap_coeff", 2.0, "Delta(1) ~ 2 lambda^2/g"},
  };
  return table;
}

bool has_reference(const std::string& family, const std::string& quantity) {
  for (const auto& entry : reference_table()) {
    if (entry.family == family && entry.quantity == quantity) return true;
  }
  return false;
}

double reference_value(const std::string& family, const std::string& quantity) {
  for (const auto& entry : reference_table()) {
    if (entry.family == family && entry.quantity == quantity) return entry.value;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double paper_cluster_fidelity(const std::string& family, std::size_t n_sites,
                              const HamiltonianParams& params) {
  if (family != "ring" && family != "line") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double x = params.lambda / params.g;
  return 1.0 / (1.0 + static_cast<double>(n_sites) * x * x);
}

}  // namespace pepslab
