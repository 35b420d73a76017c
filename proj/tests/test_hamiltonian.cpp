#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pepslab/cluster.hpp>
#include <pepslab/duality.hpp>
#include <pepslab/hamiltonian.hpp>
#include <pepslab/lattice.hpp>
#include <pepslab/state.hpp>

#include <cmath>
#include <random>

#include "test_helpers.hpp"

using namespace pepslab;

TEST_CASE("site term: one ZZ per intra edge at -g") {
  const GraphSpec ring = build_named("ring", {3});
  const WeightedPauliSum h = build_site_hamiltonian(ring, 2.0);
  REQUIRE(h.size() == 3);
  for (const auto& term : h) {
    CHECK(term.coeff == doctest::Approx(-2.0));
    CHECK(term.op.weight() == 2);
    for (std::size_t q = 0; q < term.op.n_qubits(); ++q) CHECK_FALSE(term.op.x_bit(q));
  }

  // Boundary sites carry no interaction graph.
  const GraphSpec line = build_named("line", {4}, BoundaryKind::kFixed);
  CHECK(build_site_hamiltonian(line, 1.0).size() == 2);

  const GraphSpec square = build_named("square", {2, 2});
  CHECK(build_site_hamiltonian(square, 1.0).size() == 16);
}

TEST_CASE("bond term: X Z + Z X per bond at -lambda") {
  const GraphSpec ring = build_named("ring", {3});
  const QubitIndexMap map(ring);
  const auto partner = bond_partner_table(ring, map);
  const WeightedPauliSum v = build_bond_hamiltonian(ring, 0.25);
  REQUIRE(v.size() == 6);
  for (const auto& term : v) {
    CHECK(term.coeff == doctest::Approx(-0.25));
    REQUIRE(term.op.weight() == 2);
    // Each term is X on one qubit, Z on its bond partner.
    std::size_t x_at = term.op.n_qubits();
    std::size_t z_at = term.op.n_qubits();
    for (std::size_t q = 0; q < term.op.n_qubits(); ++q) {
      if (term.op.x_bit(q)) x_at = q;
      if (term.op.z_bit(q) && !term.op.x_bit(q)) z_at = q;
    }
    REQUIRE(x_at != term.op.n_qubits());
    REQUIRE(z_at != term.op.n_qubits());
    CHECK(partner[x_at] == z_at);
  }
}

TEST_CASE("total Hamiltonian is the g,lambda combination") {
  const GraphSpec g = build_named("ring", {4});
  const HamiltonianParams params{1.7, 0.3};
  WeightedPauliSum manual = build_site_hamiltonian(g, params.g);
  manual.add(build_bond_hamiltonian(g, params.lambda));
  CHECK(same_terms(build_total_hamiltonian(g, params), manual));
}

TEST_CASE("encoded stabilizers commute with the full Hamiltonian") {
  std::mt19937 rng(31);
  const GraphSpec specs[] = {
      build_named("ring", {3}),
      build_named("line", {4}, BoundaryKind::kFixed),
      build_named("hex", {1, 1}),
      load_graph(testutil::k4_document()),
  };
  for (const auto& spec : specs) {
    const WeightedPauliSum h = build_total_hamiltonian(spec, {1.0, 0.3});
    for (std::size_t mu = 0; mu < spec.n_sites(); ++mu) {
      const PauliString k = encoded_stabilizer(spec, static_cast<int>(mu));
      REQUIRE(k.is_hermitian());
      CHECK(k.hermitian_sign() == 1);
      // Commutes in the sum even where individual bond terms anticommute.
      const StateVector probe = testutil::random_state(rng, spec.n_qubits());
      const StateVector hk = apply(h, apply(k, probe));
      StateVector kh = apply(k, apply(h, probe));
      kh -= hk;
      CHECK(kh.norm() < 1e-10);
    }
  }
}

TEST_CASE("logical stabilizer on the ring is X Z Z") {
  const GraphSpec ring = build_named("ring", {4});
  for (int mu = 0; mu < 4; ++mu) {
    const PauliString s = logical_stabilizer(ring, mu).op;
    REQUIRE(s.n_qubits() == 4);
    CHECK(s.x_bit(static_cast<std::size_t>(mu)));
    CHECK(s.z_bit(static_cast<std::size_t>((mu + 1) % 4)));
    CHECK(s.z_bit(static_cast<std::size_t>((mu + 3) % 4)));
    CHECK(s.weight() == 3);
  }
}

TEST_CASE("double bonds cancel in the logical stabilizer") {
  // hex 1x1: two sites joined by three parallel bonds -> odd, Z survives.
  const GraphSpec hex = load_graph(R"({
    "sites": [{"id": 0, "coordination": 3}, {"id": 1, "coordination": 3}],
    "bonds": [[0, 0, 1, 0], [0, 1, 1, 1], [0, 2, 1, 2]]
  })");
  const PauliString s_hex = logical_stabilizer(hex, 0).op;
  CHECK(s_hex.x_bit(0));
  CHECK(s_hex.z_bit(1));

  // square 2x2 periodic: every neighbour is reached by two parallel bonds,
  // so the logical stabilizer degenerates to a bare X.
  const GraphSpec square = build_named("square", {2, 2});
  for (int mu = 0; mu < 4; ++mu) {
    const PauliString s = logical_stabilizer(square, mu).op;
    CHECK(s.weight() == 1);
    CHECK(s.x_bit(static_cast<std::size_t>(mu)));
  }
}

TEST_CASE("logical_from_encoded inverts the encoding of stabilizers") {
  const GraphSpec specs[] = {
      build_named("ring", {3}),
      build_named("line", {4}, BoundaryKind::kFixed),
      load_graph(testutil::k4_document()),
  };
  for (const auto& spec : specs) {
    for (std::size_t mu = 0; mu < spec.n_sites(); ++mu) {
      const PauliString encoded = encoded_stabilizer(spec, static_cast<int>(mu));
      CHECK(logical_from_encoded(spec, encoded).op ==
            logical_stabilizer(spec, static_cast<int>(mu)).op);
    }
  }
}

TEST_CASE("logical_from_encoded rejects operators leaving the logical space") {
  const GraphSpec ring = build_named("ring", {3});
  const QubitIndexMap map(ring);
  // X on a single port flips one qubit of the site: breaks the intra Ising terms.
  const PauliString bad = PauliString::single(ring.n_qubits(), map.index(0, 0), 'X');
  CHECK_THROWS_AS(logical_from_encoded(ring, bad), std::invalid_argument);
}

TEST_CASE("cluster Hamiltonian pins the cluster state") {
  const GraphSpec ring = build_named("ring", {4});
  const double delta = 0.7;
  const WeightedPauliSum hc = build_cluster_hamiltonian(ring, delta);
  const StateVector cluster = site_cluster_state(ring);

  CHECK(expectation(hc, cluster) == doctest::Approx(-delta * 4.0).epsilon(1e-12));
  for (int mu = 0; mu < 4; ++mu) {
    const auto s = logical_stabilizer(ring, mu).op;
    CHECK(std::real(expectation(s, cluster)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
