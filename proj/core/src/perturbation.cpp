#include "pepslab/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pepslab {
namespace {

void charge_budget(std::uint64_t& used, std::uint64_t limit) {
  if (++used > limit) {
    throw BudgetExceededError("perturbation budget exceeded after " +
                              std::to_string(limit) +
                              " enumeration steps; raise the budget or lower "
                              "the expansion order");
  }
}

// Ising cut size of every port subset; a zero cut on a proper non-empty
// subset means the interaction graph is disconnected, which would put more
// than one logical qubit on the site.
std::vector<int> make_cut_table(const SiteSpec& site) {
  const int c = site.coordination;
  if (c < 1 || c > 16) {
    throw std::invalid_argument("path enumeration supports coordination 1..16, got " +
                                std::to_string(c));
  }
  const std::size_t dim = std::size_t{1} << c;
  std::vector<int> cuts(dim, 0);
  for (std::size_t w = 1; w + 1 < dim; ++w) {
    int cut = 0;
    for (const auto& e : site.intra_edges) {
      const bool a = (w >> e.first) & 1u;
      const bool b = (w >> e.second) & 1u;
      cut += (a != b) ? 1 : 0;
    }
    if (cut == 0) {
      throw std::invalid_argument(
          "site interaction graph is disconnected; the site does not define "
          "a single logical qubit");
    }
    cuts[w] = cut;
  }
  return cuts;
}

struct PurePath {
  std::vector<int> ports;
  std::vector<int> slot_cuts;
  bool s_channel = false;
};

// Excursions of exactly `length` port flips: start from the aligned pattern,
// stay off the ground pair {empty, full} in between, land back on it.  The
// final pattern selects the channel: empty closes on the identity, full on
// the site stabilizer.
void collect_paths(const SiteSpec& site, const std::vector<int>& cuts, int length,
                   std::uint64_t& used, std::uint64_t limit,
                   const std::function<void(const PurePath&)>& sink) {
  const int c = site.coordination;
  const std::uint32_t full = (1u << c) - 1;
  PurePath cur;
  cur.ports.assign(static_cast<std::size_t>(length), 0);
  cur.slot_cuts.assign(static_cast<std::size_t>(length) - 1, 0);

  std::function<void(int, std::uint32_t)> step = [&](int depth, std::uint32_t w) {
    for (int p = 0; p < c; ++p) {
      charge_budget(used, limit);
      const std::uint32_t nw = w ^ (1u << p);
      cur.ports[static_cast<std::size_t>(depth)] = p;
      if (depth + 1 == length) {
        if (nw == 0) {
          cur.s_channel = false;
          sink(cur);
        } else if (nw == full) {
          cur.s_channel = true;
          sink(cur);
        }
        continue;
      }
      if (nw == 0 || nw == full) continue;
      cur.slot_cuts[static_cast<std::size_t>(depth)] = cuts[nw];
      step(depth + 1, nw);
    }
  };
  step(0, 0);
}

const SiteAlgebra kAlgebraZero{Rational(0), Rational(0)};
const SiteAlgebra kAlgebraOne{Rational(1), Rational(0)};

// Resolvent factor of one slot with denominator d = -2g*cut carrying `m`
// orders of energy-correction insertions, base resolvent included:
//   F[m] = (1/d) * sum over ordered compositions of m into parts >= 2
//          of prod_parts (-e_part / d),
// an element of the site algebra because the corrections e_part are.
std::vector<SiteAlgebra> slot_factor_table(int cut,
                                           const std::vector<SiteAlgebra>& series,
                                           int max_extra) {
  const Rational d(-2 * cut);
  const Rational inv_d = Rational(1) / d;
  const Rational neg_inv_d = -inv_d;
  std::vector<SiteAlgebra> t(static_cast<std::size_t>(max_extra) + 1, kAlgebraZero);
  t[0] = kAlgebraOne;
  for (int m = 2; m <= max_extra; ++m) {
    SiteAlgebra acc = kAlgebraZero;
    for (int part = 2; part <= m; ++part) {
      const auto& e_part = series[static_cast<std::size_t>(part)];
      if (e_part.is_zero() || t[static_cast<std::size_t>(m - part)].is_zero()) continue;
      acc += (e_part * t[static_cast<std::size_t>(m - part)]) * neg_inv_d;
    }
    t[static_cast<std::size_t>(m)] = acc;
  }
  for (auto& f : t) f = f * inv_d;
  return t;
}

// Distribute `extra` insertion orders over the slots of one path and
// accumulate the resulting algebra terms into theta.
void accumulate_path(const PurePath& path, int extra,
                     const std::map<int, std::vector<SiteAlgebra>>& factors,
                     const SiteAlgebra& base, SiteAlgebra& theta,
                     std::uint64_t& used, std::uint64_t limit) {
  const std::size_t n_slots = path.slot_cuts.size();
  std::function<void(std::size_t, int, const SiteAlgebra&)> place =
      [&](std::size_t slot, int rem, const SiteAlgebra& acc) {
        charge_budget(used, limit);
        if (acc.is_zero()) return;
        if (slot == n_slots) {
          if (rem != 0) return;
          SiteAlgebra term = acc;
          if (path.s_channel) std::swap(term.identity, term.stabilizer);
          theta += term;
          return;
        }
        const auto& f = factors.at(path.slot_cuts[slot]);
        for (int m = 0; m <= rem; ++m) {
          if (f[static_cast<std::size_t>(m)].is_zero()) continue;
          place(slot + 1, rem - m, acc * f[static_cast<std::size_t>(m)]);
        }
      };
  place(0, extra, base);
}

void check_order(int max_order, const char* who) {
  if (max_order < 1 || max_order > kMaxExpansionOrder) {
    throw std::invalid_argument(std::string(who) + ": expansion order must be 1.." +
                                std::to_string(kMaxExpansionOrder) + ", got " +
                                std::to_string(max_order));
  }
}

// Sites with identical local structure share their expansion.
std::string class_key(const SiteSpec& site) {
  std::string key = site.boundary ? "b" : "c";
  key += std::to_string(site.coordination);
  auto edges = site.intra_edges;
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  for (const auto& e : edges) {
    key += ":" + std::to_string(e.first) + "-" + std::to_string(e.second);
  }
  return key;
}

std::vector<int> canonical_sites(std::vector<int> sites) {
  std::sort(sites.begin(), sites.end());
  std::vector<int> out;
  out.reserve(sites.size());
  for (std::size_t i = 0; i < sites.size();) {
    if (i + 1 < sites.size() && sites[i + 1] == sites[i]) {
      i += 2;  // S^2 = 1
    } else {
      out.push_back(sites[i]);
      ++i;
    }
  }
  return out;
}

std::vector<int> checked_config(const std::vector<int>& flipped, std::size_t n_sites,
                                const char* who) {
  std::vector<int> sites = canonical_sites(flipped);
  for (int s : sites) {
    if (s < 0 || static_cast<std::size_t>(s) >= n_sites) {
      throw std::out_of_range(std::string(who) + ": flipped site " + std::to_string(s) +
                              " out of range for " + std::to_string(n_sites) + " sites");
    }
  }
  return sites;
}

}  // namespace

std::vector<SiteAlgebra> site_energy_series(const SiteSpec& site, int max_order,
                                            std::uint64_t budget_limit,
                                            std::uint64_t& budget_used) {
  check_order(max_order, "site_energy_series");
  std::vector<SiteAlgebra> series(static_cast<std::size_t>(max_order) + 1, kAlgebraZero);
  if (site.boundary) {
    series[1] = SiteAlgebra{Rational(0), Rational(-1)};
    return series;
  }

  const auto cuts = make_cut_table(site);
  std::vector<std::vector<PurePath>> paths(static_cast<std::size_t>(max_order) + 1);
  for (int v = 2; v <= max_order; ++v) {
    collect_paths(site, cuts, v, budget_used, budget_limit,
                  [&](const PurePath& p) { paths[static_cast<std::size_t>(v)].push_back(p); });
  }

  for (int k = 2; k <= max_order; ++k) {
    std::map<int, std::vector<SiteAlgebra>> factors;
    for (int v = 2; v <= k; ++v) {
      for (const auto& path : paths[static_cast<std::size_t>(v)]) {
        for (int cut : path.slot_cuts) {
          if (!factors.count(cut)) factors.emplace(cut, slot_factor_table(cut, series, k - 2));
        }
      }
    }
    SiteAlgebra theta = kAlgebraZero;
    for (int v = 2; v <= k; ++v) {
      const SiteAlgebra base{Rational(v % 2 == 0 ? 1 : -1), Rational(0)};
      for (const auto& path : paths[static_cast<std::size_t>(v)]) {
        accumulate_path(path, k - v, factors, base, theta, budget_used, budget_limit);
      }
    }
    series[static_cast<std::size_t>(k)] = theta;
  }
  return series;
}

bool StabilizerPolynomial::is_zero() const { return terms_.empty(); }

void StabilizerPolynomial::add_term(std::vector<int> sites, const Rational& coeff) {
  if (coeff.is_zero()) return;
  auto key = canonical_sites(std::move(sites));
  for (int s : key) {
    if (s < 0 || static_cast<std::size_t>(s) >= n_sites_) {
      throw std::out_of_range("stabilizer site " + std::to_string(s) +
                              " out of range for " + std::to_string(n_sites_) + " sites");
    }
  }
  auto [it, inserted] = terms_.emplace(std::move(key), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Rational StabilizerPolynomial::coefficient(std::vector<int> sites) const {
  const auto key = canonical_sites(std::move(sites));
  const auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

StabilizerPolynomial StabilizerPolynomial::operator+(const StabilizerPolynomial& o) const {
  if (n_sites_ != o.n_sites_) {
    throw std::invalid_argument("stabilizer polynomials act on different registers");
  }
  StabilizerPolynomial out(n_sites_);
  out.terms_ = terms_;
  for (const auto& [key, coeff] : o.terms_) {
    auto [it, inserted] = out.terms_.emplace(key, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second.is_zero()) out.terms_.erase(it);
    }
  }
  return out;
}

StabilizerPolynomial StabilizerPolynomial::operator*(const StabilizerPolynomial& o) const {
  if (n_sites_ != o.n_sites_) {
    throw std::invalid_argument("stabilizer polynomials act on different registers");
  }
  StabilizerPolynomial out(n_sites_);
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : o.terms_) {
      std::vector<int> key;
      key.reserve(ka.size() + kb.size());
      std::set_symmetric_difference(ka.begin(), ka.end(), kb.begin(), kb.end(),
                                    std::back_inserter(key));
      out.add_term(std::move(key), ca * cb);
    }
  }
  return out;
}

Rational StabilizerPolynomial::eigenvalue_on(const std::vector<int>& flipped_sites) const {
  const auto flipped = canonical_sites(flipped_sites);
  Rational total(0);
  for (const auto& [key, coeff] : terms_) {
    std::size_t overlap = 0;
    auto it = flipped.begin();
    for (int s : key) {
      it = std::lower_bound(it, flipped.end(), s);
      if (it == flipped.end()) break;
      if (*it == s) {
        ++overlap;
        ++it;
      }
    }
    total += (overlap % 2 == 0) ? coeff : -coeff;
  }
  return total;
}

EffectiveExpansion effective_operator(const GraphSpec& spec, int max_order,
                                      std::uint64_t budget) {
  check_order(max_order, "effective_operator");
  EffectiveExpansion out;
  out.max_order = max_order;
  const std::size_t n = spec.n_sites();
  out.per_site.resize(n);

  std::map<std::string, std::vector<SiteAlgebra>> cache;
  std::uint64_t used = 0;
  for (std::size_t mu = 0; mu < n; ++mu) {
    const std::string key = class_key(spec.sites[mu]);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, site_energy_series(spec.sites[mu], max_order, budget, used)).first;
    }
    out.per_site[mu] = it->second;
  }

  out.orders.reserve(static_cast<std::size_t>(max_order));
  for (int k = 1; k <= max_order; ++k) {
    StabilizerPolynomial poly(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
      const auto& term = out.per_site[mu][static_cast<std::size_t>(k)];
      poly.add_term({}, term.identity);
      poly.add_term({static_cast<int>(mu)}, term.stabilizer);
    }
    out.orders.push_back(std::move(poly));
  }
  return out;
}

std::vector<Rational> eigenvalue_series(const EffectiveExpansion& expansion,
                                        const ZErrorConfig& config) {
  if (expansion.orders.empty()) {
    throw std::invalid_argument("eigenvalue_series: empty expansion");
  }
  const auto flipped = checked_config(config.flipped_sites,
                                      expansion.orders.front().n_sites(),
                                      "eigenvalue_series");
  std::vector<Rational> out;
  out.reserve(expansion.orders.size());
  for (const auto& poly : expansion.orders) out.push_back(poly.eigenvalue_on(flipped));
  return out;
}

double evaluate_series(const std::vector<Rational>& coeffs,
                       const HamiltonianParams& params, double zeroth) {
  if (coeffs.size() > 1 && params.g <= 0.0) {
    throw std::invalid_argument("evaluate_series requires g > 0 beyond first order");
  }
  long double total = zeroth;
  long double lambda_pow = 1.0L;
  long double g_pow = 1.0L;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    lambda_pow *= static_cast<long double>(params.lambda);
    total += coeffs[i].to_long_double() * lambda_pow / g_pow;
    g_pow *= static_cast<long double>(params.g);
  }
  return static_cast<double>(total);
}

std::vector<Rational> SiteClassSeries::flip_cost() const {
  std::vector<Rational> out;
  if (series.empty()) return out;
  out.reserve(series.size() - 1);
  for (std::size_t k = 1; k < series.size(); ++k) {
    out.push_back(series[k].stabilizer * Rational(-2));
  }
  return out;
}

double EnergySeries::cluster_energy(const HamiltonianParams& params) const {
  return evaluate_series(cluster_coeffs, params,
                         zeroth_per_g.to_double() * params.g);
}

const SiteClassSeries& EnergySeries::class_of(const std::string& label) const {
  for (const auto& cls : classes) {
    if (cls.label == label) return cls;
  }
  throw std::out_of_range("no site class labeled '" + label + "'");
}

EnergySeries energy_series(const GraphSpec& spec, int max_order, std::uint64_t budget) {
  check_order(max_order, "energy_series");
  EnergySeries out;
  out.max_order = max_order;

  long long edge_total = 0;
  for (const auto& site : spec.sites) {
    edge_total += static_cast<long long>(site.intra_edges.size());
  }
  out.zeroth_per_g = Rational(-edge_total);

  std::map<std::string, std::size_t> index_by_key;
  std::uint64_t used = 0;
  for (std::size_t mu = 0; mu < spec.n_sites(); ++mu) {
    const auto& site = spec.sites[mu];
    const std::string key = class_key(site);
    auto it = index_by_key.find(key);
    if (it == index_by_key.end()) {
      SiteClassSeries cls;
      cls.coordination = site.coordination;
      cls.boundary = site.boundary;
      cls.series = site_energy_series(site, max_order, budget, used);
      it = index_by_key.emplace(key, out.classes.size()).first;
      out.classes.push_back(std::move(cls));
    }
    out.classes[it->second].members.push_back(static_cast<int>(mu));
  }

  std::map<std::string, int> label_uses;
  for (auto& cls : out.classes) {
    const std::string base = cls.boundary ? "boundary" : "c" + std::to_string(cls.coordination);
    const int n_seen = ++label_uses[base];
    cls.label = n_seen == 1 ? base : base + "/" + std::to_string(n_seen);
  }

  out.cluster_coeffs.assign(static_cast<std::size_t>(max_order), Rational(0));
  for (const auto& cls : out.classes) {
    const Rational count(static_cast<long long>(cls.members.size()));
    for (int k = 1; k <= max_order; ++k) {
      const auto& term = cls.series[static_cast<std::size_t>(k)];
      out.cluster_coeffs[static_cast<std::size_t>(k - 1)] +=
          (term.identity + term.stabilizer) * count;
    }
  }
  return out;
}

std::vector<PathTerm> enumerate_paths(const SiteSpec& site, int length,
                                      std::uint64_t budget) {
  if (length < 1) {
    throw std::invalid_argument("enumerate_paths: length must be >= 1");
  }
  const auto cuts = make_cut_table(site);
  std::vector<PathTerm> out;
  std::uint64_t used = 0;
  collect_paths(site, cuts, length, used, budget, [&](const PurePath& p) {
    PathTerm term;
    term.ports = p.ports;
    term.slot_cuts = p.slot_cuts;
    term.s_channel = p.s_channel;
    Rational value(length % 2 == 0 ? 1 : -1);
    for (int cut : p.slot_cuts) value /= Rational(-2 * cut);
    term.value = value;
    out.push_back(std::move(term));
  });
  return out;
}

namespace {

constexpr std::size_t kOracleQubitCap = 20;

struct DenseModel {
  QubitIndexMap map;
  std::vector<std::uint64_t> site_mask;
  std::vector<double> h0;  // diagonal of the intra-site term at g = 1
  std::vector<char> in_p;  // ground-space membership of each basis state
  double e0 = 0.0;
};

DenseModel build_dense_model(const GraphSpec& spec, const char* who) {
  DenseModel model;
  model.map = QubitIndexMap(spec);
  const std::size_t n = model.map.total();
  if (n > kOracleQubitCap) {
    throw std::invalid_argument(std::string(who) + " holds dense resolvent data and supports at most " +
                                std::to_string(kOracleQubitCap) + " qubits, graph has " +
                                std::to_string(n));
  }

  model.site_mask.assign(spec.n_sites(), 0);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edge_bits;
  for (std::size_t mu = 0; mu < spec.n_sites(); ++mu) {
    const auto& site = spec.sites[mu];
    for (int p = 0; p < site.coordination; ++p) {
      model.site_mask[mu] |= std::uint64_t{1} << model.map.index(static_cast<int>(mu), p);
    }
    for (const auto& e : site.intra_edges) {
      edge_bits.emplace_back(
          std::uint64_t{1} << model.map.index(static_cast<int>(mu), e.first),
          std::uint64_t{1} << model.map.index(static_cast<int>(mu), e.second));
    }
  }
  model.e0 = -static_cast<double>(edge_bits.size());

  const std::size_t dim = std::size_t{1} << n;
  model.h0.resize(dim);
  model.in_p.resize(dim);
  for (std::uint64_t b = 0; b < dim; ++b) {
    double energy = 0.0;
    for (const auto& [ma, mb] : edge_bits) {
      const bool sa = (b & ma) != 0;
      const bool sb = (b & mb) != 0;
      energy += (sa == sb) ? -1.0 : 1.0;
    }
    model.h0[b] = energy;
    bool aligned = true;
    for (const std::uint64_t mask : model.site_mask) {
      const std::uint64_t bits = b & mask;
      if (bits != 0 && bits != mask) {
        aligned = false;
        break;
      }
    }
    model.in_p[b] = aligned ? 1 : 0;
  }
  return model;
}

// The unperturbed eigenvector with stabilizer eigenvalue -1 exactly on the
// flipped sites: per-site GHZ pairs with the matching sign, entangled-bond
// phases applied on top.
StateVector sector_state(const GraphSpec& spec, const DenseModel& model,
                         const std::vector<int>& flipped) {
  const std::size_t n_sites = spec.n_sites();
  std::vector<double> sign(n_sites, 1.0);
  for (int s : flipped) sign[static_cast<std::size_t>(s)] = -1.0;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> bond_bits;
  bond_bits.reserve(spec.bonds.size());
  for (const auto& bond : spec.bonds) {
    bond_bits.emplace_back(
        std::uint64_t{1} << model.map.index(bond.site_a, bond.port_a),
        std::uint64_t{1} << model.map.index(bond.site_b, bond.port_b));
  }

  StateVector state(model.map.total());
  const double base = std::pow(2.0, -0.5 * static_cast<double>(n_sites));
  for (std::uint64_t combo = 0; combo < (std::uint64_t{1} << n_sites); ++combo) {
    std::uint64_t index = 0;
    double amp = base;
    for (std::size_t mu = 0; mu < n_sites; ++mu) {
      if ((combo >> mu) & 1u) {
        index |= model.site_mask[mu];
        amp *= sign[mu];
      }
    }
    for (const auto& [ma, mb] : bond_bits) {
      if ((index & ma) && (index & mb)) amp = -amp;
    }
    state[index] = amp;
  }
  return state;
}

}  // namespace

std::vector<double> numeric_eigenvalue_series(const GraphSpec& spec,
                                              const ZErrorConfig& config,
                                              int max_order) {
  if (max_order < 1 || max_order > 12) {
    throw std::invalid_argument("numeric_eigenvalue_series: order must be 1..12");
  }
  const auto flipped = checked_config(config.flipped_sites, spec.n_sites(),
                                      "numeric_eigenvalue_series");
  const DenseModel model = build_dense_model(spec, "numeric_eigenvalue_series");
  const StateVector u0 = sector_state(spec, model, flipped);
  const WeightedPauliSum v_op = build_bond_hamiltonian(spec, 1.0);

  std::vector<StateVector> u;
  u.reserve(static_cast<std::size_t>(max_order));
  u.push_back(u0);
  std::vector<double> e(static_cast<std::size_t>(max_order) + 1, 0.0);
  StateVector w(model.map.total());

  for (int m = 1; m <= max_order; ++m) {
    apply_into(v_op, u[static_cast<std::size_t>(m - 1)], w);
    e[static_cast<std::size_t>(m)] = std::real(inner(u0, w));
    if (m == max_order) break;
    for (int k = 1; k < m; ++k) {
      StateVector scaled = u[static_cast<std::size_t>(m - k)];
      scaled *= e[static_cast<std::size_t>(k)];
      w -= scaled;
    }
    StateVector next(model.map.total());
    for (std::size_t b = 0; b < w.size(); ++b) {
      next[b] = model.in_p[b] ? 0.0 : w[b] / (model.e0 - model.h0[b]);
    }
    u.push_back(std::move(next));
  }
  return std::vector<double>(e.begin() + 1, e.end());
}

StateVector first_order_ground_state(const GraphSpec& spec,
                                     const HamiltonianParams& params) {
  if (params.g <= 0.0) {
    throw std::invalid_argument("first_order_ground_state requires g > 0");
  }
  const DenseModel model = build_dense_model(spec, "first_order_ground_state");
  const StateVector cluster = sector_state(spec, model, {});
  const WeightedPauliSum v_op = build_bond_hamiltonian(spec, params.lambda);

  StateVector correction(model.map.total());
  apply_into(v_op, cluster, correction);
  StateVector state = cluster;
  for (std::size_t b = 0; b < correction.size(); ++b) {
    if (!model.in_p[b]) {
      state[b] += correction[b] / (params.g * (model.e0 - model.h0[b]));
    }
  }
  state.normalize();
  return state;
}

}  // namespace pepslab
