#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pepslab/pauli.hpp>
#include <pepslab/state.hpp>

#include <complex>
#include <random>

#include "test_helpers.hpp"

using namespace pepslab;
using testutil::dense_matrix;
using testutil::dense_vector;

namespace {

double max_abs(const testutil::DenseMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("single-qubit strings are the textbook matrices") {
  const auto x = dense_matrix(PauliString::single(1, 0, 'X'));
  const auto y = dense_matrix(PauliString::single(1, 0, 'Y'));
  const auto z = dense_matrix(PauliString::single(1, 0, 'Z'));
  const std::complex<double> i(0.0, 1.0);

  CHECK(x(0, 1) == std::complex<double>(1.0));
  CHECK(x(1, 0) == std::complex<double>(1.0));
  CHECK(y(0, 1) == -i);
  CHECK(y(1, 0) == i);
  CHECK(z(0, 0) == std::complex<double>(1.0));
  CHECK(z(1, 1) == std::complex<double>(-1.0));
  CHECK(max_abs(x * y - i * z) < 1e-15);
}

TEST_CASE("qubit 0 is the least significant basis bit") {
  const auto z0 = dense_matrix(PauliString::single(2, 0, 'Z'));
  const auto z1 = dense_matrix(PauliString::single(2, 1, 'Z'));
  CHECK(z0(1, 1) == std::complex<double>(-1.0));  // basis |01> flips under Z_0
  CHECK(z1(1, 1) == std::complex<double>(1.0));
  CHECK(z1(2, 2) == std::complex<double>(-1.0));
}

TEST_CASE("products track the dense matrix product including phase") {
  std::mt19937 rng(11);
  for (std::size_t n : {1, 2, 4, 6}) {
    for (int trial = 0; trial < 30; ++trial) {
      const PauliString a = testutil::random_string(rng, n);
      const PauliString b = testutil::random_string(rng, n);
      CHECK(max_abs(dense_matrix(a * b) - dense_matrix(a) * dense_matrix(b)) < 1e-13);
    }
  }
}

TEST_CASE("commutes_with agrees with the dense commutator") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const PauliString a = testutil::random_string(rng, 5);
    const PauliString b = testutil::random_string(rng, 5);
    const auto da = dense_matrix(a);
    const auto db = dense_matrix(b);
    const bool dense_commutes = max_abs(da * db - db * da) < 1e-12;
    CHECK(a.commutes_with(b) == dense_commutes);
  }
}

TEST_CASE("hermiticity detection and sign extraction") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    PauliString p = testutil::random_hermitian_string(rng, 4);
    REQUIRE(p.is_hermitian());
    CHECK(p.hermitian_sign() == 1);
    const auto dense = dense_matrix(p);
    CHECK(max_abs(dense - dense.adjoint()) < 1e-15);

    p.multiply_phase_power(2);
    REQUIRE(p.is_hermitian());
    CHECK(p.hermitian_sign() == -1);
    CHECK(max_abs(dense_matrix(p.without_sign()) + dense_matrix(p)) < 1e-15);
  }
  // X*Z on one qubit is -iY: anti-Hermitian, not Hermitian.
  const PauliString xz =
      PauliString::single(1, 0, 'X') * PauliString::single(1, 0, 'Z');
  CHECK_FALSE(xz.is_hermitian());
}

TEST_CASE("weight counts acted qubits") {
  CHECK(PauliString(5).weight() == 0);
  const PauliString p =
      PauliString::single(5, 1, 'Y') * PauliString::single(5, 4, 'Z');
  CHECK(p.weight() == 2);
  CHECK(p.str() == "+IYIIZ");
}

TEST_CASE("merged combines duplicates and drops cancellations") {
  const PauliString zz = PauliString::single(3, 0, 'Z') * PauliString::single(3, 1, 'Z');
  const PauliString x2 = PauliString::single(3, 2, 'X');

  WeightedPauliSum sum(3);
  sum.add_term(0.5, zz);
  sum.add_term(0.25, zz);
  sum.add_term(1.0, x2);
  sum.add_term(-1.0, x2);

  const WeightedPauliSum merged = sum.merged();
  REQUIRE(merged.size() == 1);
  CHECK(merged.term(0).op == zz);
  CHECK(merged.term(0).coeff == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("apply matches the dense matrix-vector product") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 5;
    const WeightedPauliSum sum = testutil::random_hermitian_sum(rng, n, 12);
    const StateVector in = testutil::random_state(rng, n);

    const StateVector out = apply(sum, in);
    const Eigen::VectorXcd expect = dense_matrix(sum) * dense_vector(in);
    CHECK((dense_vector(out) - expect).cwiseAbs().maxCoeff() < 1e-12);

    StateVector out2(n);
    apply_into(sum, in, out2);
    CHECK((dense_vector(out2) - expect).cwiseAbs().maxCoeff() < 1e-12);

    const PauliString p = testutil::random_string(rng, n);
    const StateVector single = apply(p, in);
    const Eigen::VectorXcd expect_single = dense_matrix(p) * dense_vector(in);
    CHECK((dense_vector(single) - expect_single).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("expectation matches the dense quadratic form") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 4;
    const WeightedPauliSum sum = testutil::random_hermitian_sum(rng, n, 10);
    const StateVector v = testutil::random_state(rng, n);
    const Eigen::VectorXcd dv = dense_vector(v);
    const double expect = std::real(std::complex<double>(dv.adjoint() * dense_matrix(sum) * dv));
    CHECK(expectation(sum, v) == doctest::Approx(expect).epsilon(1e-11));
  }
}
