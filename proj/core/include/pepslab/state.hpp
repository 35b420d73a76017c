#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "pepslab/pauli.hpp"

namespace pepslab {

// Dense state vector on n qubits, amplitudes indexed little-endian: bit q of
// the amplitude index is the computational value of qubit q.  Intended for
// exact work on small systems; construction refuses n > 26 (a 1 GiB vector)
// to catch accidental use on lattices that only support symbolic operators.
class StateVector {
 public:
  explicit StateVector(std::size_t n_qubits);

  static StateVector basis_state(std::size_t n_qubits, std::uint64_t index);
  static StateVector uniform_superposition(std::size_t n_qubits);

  std::size_t n_qubits() const { return n_; }
  std::size_t size() const { return amps_.size(); }
  std::complex<double>& operator[](std::size_t i) { return amps_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return amps_[i]; }
  std::vector<std::complex<double>>& amplitudes() { return amps_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }

  double norm() const;
  void normalize();  // throws std::domain_error on the zero vector

  StateVector& operator+=(const StateVector& other);
  StateVector& operator-=(const StateVector& other);
  StateVector& operator*=(std::complex<double> scalar);

 private:
  std::size_t n_ = 0;
  std::vector<std::complex<double>> amps_;
};

// <a|b>
std::complex<double> inner(const StateVector& a, const StateVector& b);

StateVector apply(const PauliString& op, const StateVector& in);
StateVector apply(const WeightedPauliSum& op, const StateVector& in);

// out = op * in, overwriting out.  The workhorse for iterative eigensolvers.
void apply_into(const WeightedPauliSum& op, const StateVector& in, StateVector& out);

// <state|op|state> for a Hermitian op; the imaginary part is discarded
// (it is zero up to rounding by Hermiticity).
double expectation(const WeightedPauliSum& op, const StateVector& state);
std::complex<double> expectation(const PauliString& op, const StateVector& state);

}  // namespace pepslab
