#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pepslab/hamiltonian.hpp"
#include "pepslab/lattice.hpp"
#include "pepslab/rational.hpp"
#include "pepslab/state.hpp"

namespace pepslab {

struct BudgetExceededError : std::runtime_error {
  explicit BudgetExceededError(const std::string& what) : std::runtime_error(what) {}
};

// Highest implemented expansion order.  The combinatorics are generic, but
// coefficients beyond this order have no independent cross-check, so higher
// requests are refused instead of extrapolated.
inline constexpr int kMaxExpansionOrder = 6;
inline constexpr std::uint64_t kDefaultPathBudget = 50'000'000;

// Element of the commutative algebra spanned by {1, S} at one site
// (S^2 = 1): identity + stabilizer * S.
struct SiteAlgebra {
  Rational identity;
  Rational stabilizer;

  bool is_zero() const { return identity.is_zero() && stabilizer.is_zero(); }
  SiteAlgebra operator+(const SiteAlgebra& o) const {
    return {identity + o.identity, stabilizer + o.stabilizer};
  }
  SiteAlgebra& operator+=(const SiteAlgebra& o) { return *this = *this + o; }
  SiteAlgebra operator*(const SiteAlgebra& o) const {
    return {identity * o.identity + stabilizer * o.stabilizer,
            identity * o.stabilizer + stabilizer * o.identity};
  }
  SiteAlgebra operator*(const Rational& r) const {
    return {identity * r, stabilizer * r};
  }
  // Eigenvalue on a site with stabilizer eigenvalue s = +/-1.
  Rational eigenvalue(int s) const {
    return s > 0 ? identity + stabilizer : identity - stabilizer;
  }
};

// Exact expansion coefficients of one decoupled site: element k (1-based)
// carries the order-k energy contribution (a + b S) * lambda^k / g^{k-1}.
// Boundary sites contribute only the first-order term -S.
std::vector<SiteAlgebra> site_energy_series(const SiteSpec& site, int max_order,
                                            std::uint64_t budget_limit,
                                            std::uint64_t& budget_used);

// Rational combination of products of site stabilizers, keyed by the sorted
// set of participating sites.
class StabilizerPolynomial {
 public:
  StabilizerPolynomial() = default;
  explicit StabilizerPolynomial(std::size_t n_sites) : n_sites_(n_sites) {}

  std::size_t n_sites() const { return n_sites_; }
  bool is_zero() const;
  void add_term(std::vector<int> sites, const Rational& coeff);
  Rational coefficient(std::vector<int> sites) const;
  const std::map<std::vector<int>, Rational>& terms() const { return terms_; }

  StabilizerPolynomial operator+(const StabilizerPolynomial& o) const;
  StabilizerPolynomial operator*(const StabilizerPolynomial& o) const;

  // Eigenvalue on the Z-error configuration flipping the given sites:
  // each product term contributes coeff * (-1)^{|term ∩ flipped|}.
  Rational eigenvalue_on(const std::vector<int>& flipped_sites) const;

 private:
  std::size_t n_sites_ = 0;
  std::map<std::vector<int>, Rational> terms_;
};

struct ZErrorConfig {
  std::vector<int> flipped_sites;  // sorted, distinct
};

// theta^(k) for k = 1..max_order: the order-k effective operator on the
// logical subspace in units lambda^k / g^{k-1}, as a stabilizer polynomial
// (every term is 1 or a single S_mu; additivity over sites is exact here and
// is cross-checked against the dense oracle in the tests).
struct EffectiveExpansion {
  int max_order = 0;
  std::vector<StabilizerPolynomial> orders;          // [k-1] -> theta^(k)
  std::vector<std::vector<SiteAlgebra>> per_site;    // [site][k] (index 0 unused)
};

EffectiveExpansion effective_operator(const GraphSpec& spec, int max_order,
                                      std::uint64_t budget = kDefaultPathBudget);

// Exact eigenvalue coefficients on a configuration; element k-1 multiplies
// lambda^k / g^{k-1}.
std::vector<Rational> eigenvalue_series(const EffectiveExpansion& expansion,
                                        const ZErrorConfig& config);

// sum_k coeffs[k-1] * lambda^k / g^{k-1} (+ zeroth, units of energy).
double evaluate_series(const std::vector<Rational>& coeffs,
                       const HamiltonianParams& params, double zeroth = 0.0);

// Sites grouped by equivalent local structure (coordination + interaction
// graph + boundary flag); the expansion coefficients per class plus the
// derived observables of interest.
struct SiteClassSeries {
  std::string label;
  int coordination = 0;
  bool boundary = false;
  std::vector<int> members;
  std::vector<SiteAlgebra> series;  // [k], index 0 unused
  // Energy cost of flipping one stabilizer of this class, per order:
  // -2 b^(k) in units lambda^k / g^{k-1}.
  std::vector<Rational> flip_cost() const;
};

struct EnergySeries {
  int max_order = 0;
  Rational zeroth_per_g;               // E^(0) / g
  std::vector<SiteClassSeries> classes;
  std::vector<Rational> cluster_coeffs;  // E_C^(k): all stabilizers at +1

  double cluster_energy(const HamiltonianParams& params) const;
  const SiteClassSeries& class_of(const std::string& label) const;
};

EnergySeries energy_series(const GraphSpec& spec, int max_order,
                           std::uint64_t budget = kDefaultPathBudget);

// One pure excursion (no energy-correction insertions) of length `length`
// at a site: the A-term port sequence, the Ising cut of each intermediate
// flip pattern, the channel it closes on, and its exact value
// (-1)^v / prod(-2 cut).
struct PathTerm {
  int site = -1;
  std::vector<int> ports;
  std::vector<int> slot_cuts;
  bool s_channel = false;
  Rational value;
};

std::vector<PathTerm> enumerate_paths(const SiteSpec& site, int length,
                                      std::uint64_t budget = kDefaultPathBudget);

// Dense-resolvent oracle for the same eigenvalue series, evaluated at g = 1
// so element k-1 is directly comparable with eigenvalue_series.  Implements
// the self-consistent expansion (energy denominators corrected order by
// order by the lower-order results) with no per-site factorization
// assumption; exponential in qubit count, for cross-checks only.
std::vector<double> numeric_eigenvalue_series(const GraphSpec& spec,
                                              const ZErrorConfig& config,
                                              int max_order);

// |C> + Omega Q (lambda V) |C>, normalized: the first-order corrected ground
// state constructed directly from the resolvent.
StateVector first_order_ground_state(const GraphSpec& spec,
                                     const HamiltonianParams& params);

}  // namespace pepslab
