#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pepslab/hamiltonian.hpp>
#include <pepslab/lattice.hpp>
#include <pepslab/perturbation.hpp>
#include <pepslab/spectral.hpp>
#include <pepslab/state.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "test_helpers.hpp"

using namespace pepslab;

namespace {

SiteSpec default_site(int coordination) {
  return SiteSpec{coordination, default_intra_edges(coordination), coordination == 1};
}

std::vector<SiteAlgebra> series_of(int coordination, int max_order) {
  std::uint64_t used = 0;
  return site_energy_series(default_site(coordination), max_order, kDefaultPathBudget,
                            used);
}

bool zero_polynomial(const StabilizerPolynomial& p) { return p.is_zero(); }

}  // namespace

TEST_CASE("site series match the published coefficients exactly") {
  SUBCASE("coordination 2") {
    const auto s = series_of(2, 6);
    CHECK(s[1].is_zero());
    CHECK(s[2].identity == Rational(-1));
    CHECK(s[2].stabilizer == Rational(-1));
    CHECK(s[3].is_zero());
    CHECK(s[4].identity == Rational(1));
    CHECK(s[4].stabilizer == Rational(1));
    CHECK(s[5].is_zero());
    CHECK(s[6].identity == Rational(-2));
    CHECK(s[6].stabilizer == Rational(-2));
  }
  SUBCASE("coordination 3") {
    const auto s = series_of(3, 4);
    CHECK(s[1].is_zero());
    CHECK(s[2].identity == Rational(-3, 4));
    CHECK(s[2].stabilizer == Rational(0));
    CHECK(s[3].identity == Rational(0));
    CHECK(s[3].stabilizer == Rational(-3, 8));
    CHECK(s[4].identity + s[4].stabilizer == Rational(-3, 64));
  }
  SUBCASE("coordination 4") {
    const auto s = series_of(4, 4);
    CHECK(s[2].identity == Rational(-1));
    CHECK(s[2].stabilizer == Rational(0));
    CHECK(s[3].is_zero());
    CHECK(s[4].identity == Rational(-1, 16));
    CHECK(s[4].stabilizer == Rational(-5, 16));
  }
  SUBCASE("coordination 6") {
    const auto s = series_of(6, 6);
    CHECK(s[2].identity == Rational(-3, 4));
    CHECK(s[2].stabilizer == Rational(0));
    CHECK(s[3].is_zero());
    CHECK(s[4].identity == Rational(-1, 256));
    CHECK(s[4].stabilizer == Rational(0));
    CHECK(s[5].is_zero());
    CHECK(s[6].identity == Rational(-13, 49152));
    CHECK(s[6].stabilizer == Rational(-83, 16384));
  }
  SUBCASE("boundary sites carry only the first order") {
    const auto s = series_of(1, 4);
    CHECK(s[1].identity == Rational(0));
    CHECK(s[1].stabilizer == Rational(-1));
    CHECK(s[2].is_zero());
    CHECK(s[3].is_zero());
    CHECK(s[4].is_zero());
  }
}

TEST_CASE("pure path sums reproduce the insertion-free orders") {
  for (int c : {2, 3, 4}) {
    const SiteSpec site = default_site(c);
    const auto series = series_of(c, 3);
    for (int length : {2, 3}) {
      const auto paths = enumerate_paths(site, length);
      Rational identity_sum(0);
      Rational stabilizer_sum(0);
      for (const auto& term : paths) {
        REQUIRE(term.ports.size() == static_cast<std::size_t>(length));
        REQUIRE(term.slot_cuts.size() == static_cast<std::size_t>(length - 1));
        std::vector<int> parity(static_cast<std::size_t>(c), 0);
        for (int p : term.ports) {
          REQUIRE(p >= 0);
          REQUIRE(p < c);
          parity[static_cast<std::size_t>(p)] ^= 1;
        }
        // A path closes on the identity channel (all ports even) or on the
        // stabilizer channel (all ports odd); nothing in between returns.
        const bool all_even =
            std::all_of(parity.begin(), parity.end(), [](int v) { return v == 0; });
        const bool all_odd =
            std::all_of(parity.begin(), parity.end(), [](int v) { return v == 1; });
        CHECK(term.s_channel == all_odd);
        CHECK((all_even || all_odd));

        Rational value(length % 2 == 0 ? 1 : -1);
        for (int cut : term.slot_cuts) {
          CHECK(cut >= 1);
          value /= Rational(-2 * cut);
        }
        CHECK(term.value == value);
        (term.s_channel ? stabilizer_sum : identity_sum) += term.value;
      }
      // Insertion corrections start at fourth order, so the raw excursion
      // sums are the series coefficients here.
      CHECK(identity_sum == series[static_cast<std::size_t>(length)].identity);
      CHECK(stabilizer_sum == series[static_cast<std::size_t>(length)].stabilizer);
    }
  }
}

TEST_CASE("effective operator aggregates translation-equivalent sites") {
  const GraphSpec ring = build_named("ring", {4});
  const EffectiveExpansion exp = effective_operator(ring, 4);
  REQUIRE(exp.max_order == 4);

  const StabilizerPolynomial& theta2 = exp.orders[1];
  CHECK(theta2.coefficient({}) == Rational(-4));
  for (int mu = 0; mu < 4; ++mu) CHECK(theta2.coefficient({mu}) == Rational(-1));
  for (const auto& [sites, coeff] : theta2.terms()) {
    CHECK(sites.size() <= 1);
  }

  for (int mu = 1; mu < 4; ++mu) {
    for (int k = 1; k <= 4; ++k) {
      CHECK(exp.per_site[static_cast<std::size_t>(mu)][static_cast<std::size_t>(k)].identity ==
            exp.per_site[0][static_cast<std::size_t>(k)].identity);
      CHECK(exp.per_site[static_cast<std::size_t>(mu)][static_cast<std::size_t>(k)].stabilizer ==
            exp.per_site[0][static_cast<std::size_t>(k)].stabilizer);
    }
  }
}

TEST_CASE("odd orders vanish where parity forces them") {
  const EffectiveExpansion ring = effective_operator(build_named("ring", {3}), 6);
  CHECK(zero_polynomial(ring.orders[0]));
  CHECK(zero_polynomial(ring.orders[2]));
  CHECK(zero_polynomial(ring.orders[4]));

  const EffectiveExpansion square = effective_operator(build_named("square", {2, 2}), 4);
  CHECK(zero_polynomial(square.orders[0]));
  CHECK(zero_polynomial(square.orders[2]));

  const EffectiveExpansion hex = effective_operator(build_named("hex", {1, 1}), 3);
  CHECK(zero_polynomial(hex.orders[0]));
  CHECK_FALSE(zero_polynomial(hex.orders[2]));
}

TEST_CASE("numeric oracle confirms the symbolic series on the ring") {
  const GraphSpec ring = build_named("ring", {3});
  const EffectiveExpansion exp = effective_operator(ring, 6);
  for (const auto& flips : std::vector<std::vector<int>>{{}, {0}, {0, 1}}) {
    const ZErrorConfig config{flips};
    const auto symbolic = eigenvalue_series(exp, config);
    const auto numeric = numeric_eigenvalue_series(ring, config, 6);
    REQUIRE(symbolic.size() == 6);
    REQUIRE(numeric.size() == 6);
    for (std::size_t k = 0; k < 6; ++k) {
      const double sym = symbolic[k].to_double();
      CHECK(std::abs(numeric[k] - sym) <= 1e-9 * std::max(1.0, std::abs(sym)));
    }
  }
}

TEST_CASE("numeric oracle confirms the symbolic series on K4") {
  const GraphSpec k4 = load_graph(testutil::k4_document());
  const EffectiveExpansion exp = effective_operator(k4, 4);
  for (const auto& flips :
       std::vector<std::vector<int>>{{}, {0}, {0, 1}, {0, 1, 2, 3}}) {
    const ZErrorConfig config{flips};
    const auto symbolic = eigenvalue_series(exp, config);
    const auto numeric = numeric_eigenvalue_series(k4, config, 4);
    for (std::size_t k = 0; k < 4; ++k) {
      const double sym = symbolic[k].to_double();
      CHECK(std::abs(numeric[k] - sym) <= 1e-9 * std::max(1.0, std::abs(sym)));
    }
  }
}

TEST_CASE("energy series: cluster coefficients are exact") {
  SUBCASE("ring") {
    const EnergySeries e = energy_series(build_named("ring", {3}), 6);
    CHECK(e.zeroth_per_g == Rational(-3));
    CHECK(e.cluster_coeffs[0] == Rational(0));
    CHECK(e.cluster_coeffs[1] == Rational(-6));
    CHECK(e.cluster_coeffs[2] == Rational(0));
    CHECK(e.cluster_coeffs[3] == Rational(6));
    CHECK(e.cluster_coeffs[4] == Rational(0));
    CHECK(e.cluster_coeffs[5] == Rational(-12));
    REQUIRE(e.classes.size() == 1);
    CHECK(e.classes[0].coordination == 2);
    CHECK(e.classes[0].members.size() == 3);
    CHECK(e.classes[0].flip_cost()[1] == Rational(2));
  }
  SUBCASE("fixed line") {
    const EnergySeries e = energy_series(build_named("line", {4}, BoundaryKind::kFixed), 2);
    CHECK(e.zeroth_per_g == Rational(-2));
    CHECK(e.cluster_coeffs[0] == Rational(-2));
    CHECK(e.cluster_coeffs[1] == Rational(-4));
    REQUIRE(e.classes.size() == 2);
    const auto& boundary = e.class_of("boundary");
    CHECK(boundary.boundary);
    CHECK(boundary.members.size() == 2);
    CHECK(boundary.flip_cost()[0] == Rational(2));
  }
  SUBCASE("hex") {
    const EnergySeries e = energy_series(build_named("hex", {2, 2}), 3);
    CHECK(e.zeroth_per_g == Rational(-24));
    CHECK(e.cluster_coeffs[1] == Rational(-6));
    CHECK(e.cluster_coeffs[2] == Rational(-3));
    CHECK(e.class_of("c3").flip_cost()[2] == Rational(3, 4));
  }
  SUBCASE("fixed square") {
    const EnergySeries e = energy_series(build_named("square", {4, 4}, BoundaryKind::kFixed), 4);
    const auto& c2 = e.class_of("c2");
    const auto& c3 = e.class_of("c3");
    const auto& c4 = e.class_of("c4");
    CHECK(c2.members.size() == 4);
    CHECK(c3.members.size() == 8);
    CHECK(c4.members.size() == 4);
    CHECK(c2.series[2].identity + c2.series[2].stabilizer == Rational(-2));
    CHECK(c3.series[4].identity + c3.series[4].stabilizer == Rational(-3, 64));
    CHECK(c4.series[4].identity + c4.series[4].stabilizer == Rational(-3, 8));
    // Aggregates from the published fixed-boundary expansion at N_S = 4:
    // E^(2) = -(N + 3 sqrt(N) + 8), E^(3) = -3 sqrt(N)/2,
    // E^(4) = (-6N - 3 sqrt(N) + 128)/16.
    CHECK(e.cluster_coeffs[1] == Rational(-18));
    CHECK(e.cluster_coeffs[2] == Rational(-3));
    CHECK(e.cluster_coeffs[3] == Rational(49, 8));
  }
}

TEST_CASE("flip costs reproduce the published gap table") {
  const EnergySeries ring = energy_series(build_named("ring", {3}), 2);
  CHECK(ring.class_of("c2").flip_cost()[1] == Rational(2));

  const EnergySeries hex = energy_series(build_named("hex", {1, 1}), 3);
  CHECK(hex.class_of("c3").flip_cost()[2] == Rational(3, 4));

  const EnergySeries square = energy_series(build_named("square", {2, 2}), 4);
  CHECK(square.class_of("c4").flip_cost()[3] == Rational(5, 8));

  const EnergySeries cubic = energy_series(build_named("cubic", {2, 2, 2}), 6);
  CHECK(cubic.class_of("c6").flip_cost()[5] == Rational(83, 8192));
}

TEST_CASE("series evaluation matches direct arithmetic") {
  const GraphSpec ring = build_named("ring", {3});
  const EnergySeries e = energy_series(ring, 4);
  const HamiltonianParams params{2.0, 0.1};

  double expect = e.zeroth_per_g.to_double() * params.g;
  for (int k = 1; k <= 4; ++k) {
    expect += e.cluster_coeffs[static_cast<std::size_t>(k - 1)].to_double() *
              std::pow(params.lambda, k) / std::pow(params.g, k - 1);
  }
  CHECK(e.cluster_energy(params) == doctest::Approx(expect).epsilon(1e-14));

  const EffectiveExpansion exp = effective_operator(ring, 4);
  const auto coeffs = eigenvalue_series(exp, ZErrorConfig{{0}});
  const double zeroth = e.zeroth_per_g.to_double() * params.g;
  double by_hand = zeroth;
  for (std::size_t k = 1; k <= 4; ++k) {
    by_hand += coeffs[k - 1].to_double() * std::pow(params.lambda, static_cast<int>(k)) /
               std::pow(params.g, static_cast<int>(k - 1));
  }
  CHECK(evaluate_series(coeffs, params, zeroth) ==
        doctest::Approx(by_hand).epsilon(1e-14));
}

TEST_CASE("truncated energy series tracks the exact ground energy") {
  const GraphSpec ring = build_named("ring", {3});
  const EnergySeries e = energy_series(ring, 6);
  for (double lambda : {0.02, 0.05}) {
    const HamiltonianParams params{1.0, lambda};
    const double exact = 3.0 * closed_form_energy(LatticeFamily::kLine, 1, params);
    const double series = e.cluster_energy(params);
    // Omitted orders start at +10 x^8 per site.
    CHECK(std::abs(series - exact) < 50.0 * std::pow(lambda, 8));
  }
}

TEST_CASE("budget exhaustion throws instead of truncating") {
  std::uint64_t used = 0;
  CHECK_THROWS_AS(site_energy_series(default_site(6), 6, 10, used), BudgetExceededError);
  CHECK_THROWS_AS(energy_series(build_named("cubic", {2, 2, 2}), 6, 50),
                  BudgetExceededError);
}

TEST_CASE("orders beyond the implemented table are refused") {
  CHECK_THROWS_AS(effective_operator(build_named("ring", {3}), kMaxExpansionOrder + 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(energy_series(build_named("ring", {3}), 0), std::invalid_argument);
}

TEST_CASE("configs are range checked and duplicate flips cancel") {
  const GraphSpec ring = build_named("ring", {3});
  const EffectiveExpansion exp = effective_operator(ring, 2);
  CHECK_THROWS_AS(eigenvalue_series(exp, ZErrorConfig{{3}}), std::out_of_range);
  CHECK_THROWS_AS(numeric_eigenvalue_series(ring, ZErrorConfig{{-1}}, 2),
                  std::out_of_range);
  CHECK(eigenvalue_series(exp, ZErrorConfig{{0, 0}}) ==
        eigenvalue_series(exp, ZErrorConfig{{}}));
  CHECK(eigenvalue_series(exp, ZErrorConfig{{1, 0, 1}}) ==
        eigenvalue_series(exp, ZErrorConfig{{0}}));
}

TEST_CASE("first-order corrected state lowers the energy of the cluster state") {
  const GraphSpec ring = build_named("ring", {3});
  const HamiltonianParams params{1.0, 0.15};
  const WeightedPauliSum h = build_total_hamiltonian(ring, params);
  const StateVector corrected = first_order_ground_state(ring, params);
  const StateVector cluster = first_order_ground_state(ring, {1.0, 0.0});

  CHECK(corrected.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expectation(h, corrected) < expectation(h, cluster));

  const SpectrumReport exact = low_spectrum(h, 1, true);
  CHECK(expectation(h, corrected) >= exact.ground_energy);
}
