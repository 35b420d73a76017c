#include "pepslab/cluster.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

namespace pepslab {

StateVector logical_cluster_state(const GraphSpec& spec) {
  QubitIndexMap map(spec);
  const std::size_t n = map.total();
  StateVector state(n);

  // Bond endpoint masks: the unprojected product of bond pairs has amplitude
  // 2^{-B} (-1)^{# bonds with both endpoints set}.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> bond_bits;
  bond_bits.reserve(spec.bonds.size());
  for (const Bond& b : spec.bonds) {
    bond_bits.emplace_back(map.index(b.site_a, b.port_a), map.index(b.site_b, b.port_b));
  }

  for (std::uint64_t b = 0; b < state.size(); ++b) {
    // Keep only site-aligned components (the logical subspace).
    bool aligned = true;
    std::size_t q = 0;
    for (const SiteSpec& s : spec.sites) {
      std::uint64_t first = (b >> q) & 1u;
      for (int port = 1; port < s.coordination && aligned; ++port) {
        aligned = ((b >> (q + static_cast<std::size_t>(port))) & 1u) == first;
      }
      if (!aligned) break;
      q += static_cast<std::size_t>(s.coordination);
    }
    if (!aligned) continue;

    int sign = 1;
    for (const auto& [qa, qb] : bond_bits) {
      if (((b >> qa) & 1u) && ((b >> qb) & 1u)) sign = -sign;
    }
    state[b] = {static_cast<double>(sign), 0.0};
  }
  state.normalize();
  return state;
}

PauliString logical_z(const GraphSpec& spec, int site) {
  QubitIndexMap map(spec);
  return PauliString::single(map.total(), map.index(site, 0), 'Z');
}

StateVector z_error_state(const GraphSpec& spec, const StateVector& cluster,
                          const std::vector<int>& flipped_sites) {
  StateVector out = cluster;
  for (int site : flipped_sites) {
    out = apply(logical_z(spec, site), out);
  }
  return out;
}

double fidelity(const StateVector& a, const StateVector& b) {
  double na = a.norm();
  double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw std::domain_error("fidelity: zero vector");
  double overlap = std::abs(inner(a, b));
  return (overlap * overlap) / (na * na * nb * nb);
}

StateVector site_cluster_state(const GraphSpec& spec) {
  const std::size_t n = spec.n_sites();
  // Site pairs joined by an odd number of bonds.
  std::map<std::pair<int, int>, int> bond_count;
  for (const Bond& b : spec.bonds) {
    auto key = std::minmax(b.site_a, b.site_b);
    ++bond_count[key];
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& [pair, count] : bond_count) {
    if (count % 2 != 0) edges.push_back(pair);
  }

  StateVector state(n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(state.size()));
  for (std::uint64_t a = 0; a < state.size(); ++a) {
    int sign = 1;
    for (const auto& [mu, nu] : edges) {
      if (((a >> mu) & 1u) && ((a >> nu) & 1u)) sign = -sign;
    }
    state[a] = {sign * amp, 0.0};
  }
  return state;
}

std::vector<long double> dual_site_overlaps(const GraphSpec& spec,
                                            const HamiltonianParams& params,
                                            int threads) {
  std::vector<SiteDualModel> models = site_dual_models(spec, params, threads);
  std::vector<long double> overlaps;
  overlaps.reserve(models.size());
  for (const SiteDualModel& m : models) {
    // <GHZ|ground> with GHZ = (|0...0> + |1...1>)/sqrt(2).
    long double o = (m.ground_vector.front() + m.ground_vector.back()) / std::sqrt(2.0L);
    overlaps.push_back(o * o);
  }
  return overlaps;
}

double fidelity_bound_k(const SiteSpec& site) {
  if (site.boundary) return 0.0;
  std::vector<int> degree(static_cast<std::size_t>(site.coordination), 0);
  for (const auto& [a, b] : site.intra_edges) {
    ++degree[static_cast<std::size_t>(a)];
    ++degree[static_cast<std::size_t>(b)];
  }
  if (site.coordination == 2) {
    double amp = 0.0;
    for (int d : degree) amp += 1.0 / (2.0 * d);
    return amp * amp;
  }
  double k = 0.0;
  for (int d : degree) k += 1.0 / (4.0 * static_cast<double>(d) * d);
  return k;
}

PerSiteFidelityReport per_site_fidelity(const GraphSpec& spec,
                                        const HamiltonianParams& params,
                                        int threads) {
  PerSiteFidelityReport report;
  std::vector<long double> overlaps = dual_site_overlaps(spec, params, threads);
  long double f = 1.0L;
  for (long double o : overlaps) f *= o;
  report.global_fidelity = static_cast<double>(f);
  report.n_logical = spec.logical_sites().size();
  if (report.n_logical == 0) throw std::invalid_argument("per_site_fidelity: no logical sites");
  report.per_site = static_cast<double>(
      std::pow(f, 1.0L / static_cast<long double>(report.n_logical)));

  double k_sum = 0.0;
  for (const SiteSpec& s : spec.sites) {
    const double k = fidelity_bound_k(s);
    report.bound_k = std::max(report.bound_k, k);
    k_sum += k;
  }
  double x = params.lambda / params.g;
  report.bound_value = 1.0 / (1.0 + report.bound_k * x * x);
  report.bound_satisfied = report.per_site > report.bound_value;

  report.first_order_fidelity = 1.0 / (1.0 + k_sum * x * x);
  report.first_order_per_site = std::pow(
      report.first_order_fidelity, 1.0 / static_cast<double>(report.n_logical));
  // Equality holds when only one logical site contributes; allow rounding.
  report.first_order_bound_satisfied =
      report.first_order_per_site >= report.bound_value - 1e-12;
  return report;
}

}  // namespace pepslab
