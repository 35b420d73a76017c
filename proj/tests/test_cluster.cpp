#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include <pepslab/cluster.hpp>
#include <pepslab/duality.hpp>
#include <pepslab/hamiltonian.hpp>
#include <pepslab/lattice.hpp>
#include <pepslab/spectral.hpp>
#include <pepslab/state.hpp>

#include "test_helpers.hpp"

using namespace pepslab;

namespace {

std::vector<GraphSpec> sample_specs() {
  std::vector<GraphSpec> specs;
  specs.push_back(build_named("ring", {3}));
  specs.push_back(build_named("line", {4}, BoundaryKind::kFixed));
  specs.push_back(build_named("hex", {1, 1}));
  specs.push_back(load_graph(testutil::k4_document()));
  return specs;
}

}  // namespace

TEST_CASE("logical cluster state is a +1 eigenstate of every encoded stabilizer") {
  for (const auto& spec : sample_specs()) {
    CAPTURE(spec.n_sites());
    const StateVector cluster = logical_cluster_state(spec);
    CHECK(cluster.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t mu = 0; mu < spec.n_sites(); ++mu) {
      const auto k = expectation(encoded_stabilizer(spec, static_cast<int>(mu)), cluster);
      CHECK(k.real() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(k.imag()) < 1e-12);
    }
  }
}

TEST_CASE("z errors flip exactly the targeted stabilizers") {
  const GraphSpec spec = build_named("ring", {4});
  const StateVector cluster = logical_cluster_state(spec);

  for (int nu = 0; nu < 4; ++nu) {
    const StateVector err = z_error_state(spec, cluster, {nu});
    CHECK(err.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(cluster, err) == doctest::Approx(0.0).epsilon(1e-12));
    for (int mu = 0; mu < 4; ++mu) {
      const double expected = mu == nu ? -1.0 : 1.0;
      const auto k = expectation(encoded_stabilizer(spec, mu), err);
      CHECK(k.real() == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("multi-site flips compose and stay orthonormal") {
    const StateVector two = z_error_state(spec, cluster, {0, 2});
    for (int mu = 0; mu < 4; ++mu) {
      const double expected = (mu == 0 || mu == 2) ? -1.0 : 1.0;
      CHECK(expectation(encoded_stabilizer(spec, mu), two).real() ==
            doctest::Approx(expected).epsilon(1e-12));
    }
    const StateVector one = z_error_state(spec, cluster, {0});
    CHECK(fidelity(one, two) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("fidelity is normalized, symmetric, and scale invariant") {
  std::mt19937 rng(11);
  StateVector a = testutil::random_state(rng, 4);
  StateVector b = testutil::random_state(rng, 4);

  CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-12));

  StateVector scaled = a;
  scaled *= std::complex<double>(0.0, 3.25);
  CHECK(fidelity(a, scaled) == doctest::Approx(1.0).epsilon(1e-12));

  StateVector e0 = StateVector::basis_state(2, 0);
  StateVector e3 = StateVector::basis_state(2, 3);
  CHECK(fidelity(e0, e3) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("site cluster state is the stabilizer ground state of the site graph") {
  for (const char* kind : {"ring", "line"}) {
    const GraphSpec spec = kind == std::string("ring")
                               ? build_named("ring", {4})
                               : build_named("line", {4}, BoundaryKind::kFixed);
    CAPTURE(kind);
    const StateVector sc = site_cluster_state(spec);
    CHECK(sc.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t mu = 0; mu < spec.n_sites(); ++mu) {
      const auto s = logical_stabilizer(spec, static_cast<int>(mu));
      CHECK(expectation(s.op, sc).real() == doctest::Approx(1.0).epsilon(1e-12));
    }
    const double delta = 0.7;
    const WeightedPauliSum hc = build_cluster_hamiltonian(spec, delta);
    CHECK(expectation(hc, sc) ==
          doctest::Approx(-delta * static_cast<double>(spec.n_sites())).epsilon(1e-12));
  }
}

TEST_CASE("fidelity bound coefficients per coordination class") {
  const GraphSpec ring = build_named("ring", {3});
  const GraphSpec hex = build_named("hex", {2, 2});
  const GraphSpec square = build_named("square", {2, 2});
  const GraphSpec cubic = build_named("cubic", {2, 2, 2});

  CHECK(fidelity_bound_k(ring.sites[0]) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity_bound_k(hex.sites[0]) == doctest::Approx(3.0 / 16.0).epsilon(1e-15));
  CHECK(fidelity_bound_k(square.sites[0]) == doctest::Approx(1.0 / 4.0).epsilon(1e-15));
  CHECK(fidelity_bound_k(cubic.sites[0]) == doctest::Approx(3.0 / 32.0).epsilon(1e-15));
}

TEST_CASE("dual site overlaps multiply to the exact global fidelity") {
  const HamiltonianParams params{1.0, 0.1};
  for (const auto& spec : sample_specs()) {
    CAPTURE(spec.n_sites());
    const auto overlaps = dual_site_overlaps(spec, params);
    REQUIRE(overlaps.size() == spec.n_sites());
    long double product = 1.0L;
    for (const auto f : overlaps) {
      CHECK(f > 0.0L);
      CHECK(f <= 1.0L + 1e-15L);
      product *= f;
    }

    const WeightedPauliSum h = build_total_hamiltonian(spec, params);
    const SpectrumReport report = low_spectrum(h, 2, true);
    REQUIRE(report.has_ground_vector);
    const double direct = fidelity(logical_cluster_state(spec), report.ground_vector);
    CHECK(static_cast<double>(product) == doctest::Approx(direct).epsilon(5e-9));
  }
}

TEST_CASE("ring overlaps are translation invariant") {
  const GraphSpec spec = build_named("ring", {5});
  const auto overlaps = dual_site_overlaps(spec, HamiltonianParams{1.0, 0.07});
  for (const auto f : overlaps) {
    CHECK(static_cast<double>(f) ==
          doctest::Approx(static_cast<double>(overlaps.front())).epsilon(1e-13));
  }
}

TEST_CASE("per-site fidelity report on the ring matches the closed form") {
  const double g = 1.0;
  const double lambda = 0.05;
  const double x = lambda / g;
  const GraphSpec spec = build_named("ring", {4});
  const PerSiteFidelityReport r = per_site_fidelity(spec, HamiltonianParams{g, lambda});

  CHECK(r.n_logical == 4);
  CHECK(r.bound_k == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.bound_value == doctest::Approx(1.0 / (1.0 + x * x)).epsilon(1e-14));

  const double formula = 1.0 / (1.0 + 4.0 * x * x);
  CHECK(std::abs(r.global_fidelity - formula) < 5.0 * std::pow(x, 4));
  CHECK(r.per_site == doctest::Approx(std::pow(r.global_fidelity, 0.25)).epsilon(1e-12));
  CHECK(r.bound_satisfied);

  CHECK(r.first_order_fidelity == doctest::Approx(formula).epsilon(1e-10));
  CHECK(r.first_order_per_site ==
        doctest::Approx(std::pow(formula, 0.25)).epsilon(1e-9));
  CHECK(r.first_order_bound_satisfied);
}

TEST_CASE("exact K4 ground state sits below the first-order bound") {
  const GraphSpec spec = load_graph(testutil::k4_document());
  const double x = 0.1;
  const PerSiteFidelityReport r = per_site_fidelity(spec, HamiltonianParams{1.0, x});

  CHECK(r.bound_k == doctest::Approx(3.0 / 16.0).epsilon(1e-15));
  CHECK(r.first_order_bound_satisfied);
  CHECK_FALSE(r.bound_satisfied);
  const double margin = r.per_site - r.bound_value;
  CHECK(margin < 0.0);
  CHECK(margin > -5e-4);
}
