#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include <pepslab/pauli.hpp>
#include <pepslab/state.hpp>

namespace testutil {

using DenseMatrix = Eigen::MatrixXcd;

// Dense operator assembled qubit by qubit from literal 2x2 factors, so it
// shares no code with the symplectic fast paths it is used to check.
// Convention: string = i^phase * prod_q X_q^{x_q} Z_q^{z_q}, qubit 0 least
// significant in the basis index.
inline DenseMatrix dense_matrix(const pepslab::PauliString& p) {
  DenseMatrix acc = DenseMatrix::Identity(1, 1);
  for (std::size_t q = 0; q < p.n_qubits(); ++q) {
    Eigen::Matrix2cd f;
    const bool x = p.x_bit(q);
    const bool z = p.z_bit(q);
    if (!x && !z) {
      f << 1, 0, 0, 1;
    } else if (x && !z) {
      f << 0, 1, 1, 0;
    } else if (!x && z) {
      f << 1, 0, 0, -1;
    } else {
      f << 0, -1, 1, 0;  // X * Z
    }
    DenseMatrix out(acc.rows() * 2, acc.cols() * 2);
    out.topLeftCorner(acc.rows(), acc.cols()) = f(0, 0) * acc;
    out.topRightCorner(acc.rows(), acc.cols()) = f(0, 1) * acc;
    out.bottomLeftCorner(acc.rows(), acc.cols()) = f(1, 0) * acc;
    out.bottomRightCorner(acc.rows(), acc.cols()) = f(1, 1) * acc;
    acc = std::move(out);
  }
  return p.phase() * acc;
}

inline DenseMatrix dense_matrix(const pepslab::WeightedPauliSum& sum) {
  const std::size_t dim = std::size_t{1} << sum.n_qubits();
  DenseMatrix acc = DenseMatrix::Zero(dim, dim);
  for (const auto& term : sum) acc += term.coeff * dense_matrix(term.op);
  return acc;
}

inline Eigen::VectorXcd dense_vector(const pepslab::StateVector& v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

// Ascending eigenvalues of a Hermitian sum via a dense solve.
inline std::vector<double> dense_eigenvalues(const pepslab::WeightedPauliSum& sum) {
  const DenseMatrix m = dense_matrix(sum);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m);
  std::vector<double> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
  return out;
}

inline pepslab::PauliString random_string(std::mt19937& rng, std::size_t n) {
  pepslab::PauliString p(n);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<int> ph(0, 3);
  for (std::size_t q = 0; q < n; ++q) {
    p.set_x(q, bit(rng) != 0);
    p.set_z(q, bit(rng) != 0);
  }
  p.multiply_phase_power(ph(rng));
  return p;
}

// Literal tensor of I/X/Y/Z factors: Y = i XZ per site, so the string is
// Hermitian with sign +1 by construction.
inline pepslab::PauliString random_hermitian_string(std::mt19937& rng, std::size_t n) {
  pepslab::PauliString p(n);
  std::uniform_int_distribution<int> bit(0, 1);
  int ys = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const bool x = bit(rng) != 0;
    const bool z = bit(rng) != 0;
    p.set_x(q, x);
    p.set_z(q, z);
    if (x && z) ++ys;
  }
  p.multiply_phase_power(ys % 4);
  return p;
}

inline pepslab::WeightedPauliSum random_hermitian_sum(std::mt19937& rng, std::size_t n,
                                                      int terms) {
  pepslab::WeightedPauliSum sum(n);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int t = 0; t < terms; ++t) sum.add_term(coeff(rng), random_hermitian_string(rng, n));
  return sum.merged();
}

inline pepslab::StateVector random_state(std::mt19937& rng, std::size_t n) {
  pepslab::StateVector v(n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {gauss(rng), gauss(rng)};
  v.normalize();
  return v;
}

// Complete graph on four coordination-3 sites, same topology as graphs/k4.json.
inline const char* k4_document() {
  return R"({
    "name": "k4",
    "sites": [
      {"id": 0, "coordination": 3},
      {"id": 1, "coordination": 3},
      {"id": 2, "coordination": 3},
      {"id": 3, "coordination": 3}
    ],
    "bonds": [
      [0, 0, 1, 0], [0, 1, 2, 0], [0, 2, 3, 0],
      [1, 1, 2, 1], [1, 2, 3, 1], [2, 2, 3, 2]
    ]
  })";
}

}  // namespace testutil
