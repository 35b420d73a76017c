#include "pepslab/state.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace pepslab {

namespace {

constexpr std::size_t kMaxDenseQubits = 26;

// Masks narrowed to single words: dense vectors never exceed 26 qubits.
std::uint64_t low_word(const std::vector<std::uint64_t>& words) {
  for (std::size_t w = 1; w < words.size(); ++w) {
    if (words[w] != 0) {
      throw std::invalid_argument("StateVector: operator acts above qubit 63");
    }
  }
  return words.empty() ? 0 : words[0];
}

}  // namespace

StateVector::StateVector(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits > kMaxDenseQubits) {
    throw std::invalid_argument("StateVector: dense vectors limited to 26 qubits");
  }
  amps_.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
}

StateVector StateVector::basis_state(std::size_t n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.size()) throw std::out_of_range("StateVector: basis index out of range");
  s.amps_[index] = {1.0, 0.0};
  return s;
}

StateVector StateVector::uniform_superposition(std::size_t n_qubits) {
  StateVector s(n_qubits);
  double a = 1.0 / std::sqrt(static_cast<double>(s.size()));
  for (auto& amp : s.amps_) amp = {a, 0.0};
  return s;
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return std::sqrt(sum);
}

void StateVector::normalize() {
  double n = norm();
  if (n == 0.0) throw std::domain_error("StateVector: cannot normalize zero vector");
  *this *= std::complex<double>(1.0 / n, 0.0);
}

StateVector& StateVector::operator+=(const StateVector& other) {
  if (other.size() != size()) throw std::invalid_argument("StateVector: size mismatch");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += other.amps_[i];
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
  if (other.size() != size()) throw std::invalid_argument("StateVector: size mismatch");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] -= other.amps_[i];
  return *this;
}

StateVector& StateVector::operator*=(std::complex<double> scalar) {
  for (auto& a : amps_) a *= scalar;
  return *this;
}

std::complex<double> inner(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

StateVector apply(const PauliString& op, const StateVector& in) {
  if (op.n_qubits() != in.n_qubits()) {
    throw std::invalid_argument("apply: operator/state size mismatch");
  }
  std::uint64_t x = low_word(op.x_words());
  std::uint64_t z = low_word(op.z_words());
  std::complex<double> ph = op.phase();
  StateVector out(in.n_qubits());
  for (std::uint64_t b = 0; b < in.size(); ++b) {
    int zsign = (std::popcount(z & b) & 1) ? -1 : 1;
    out[b ^ x] = ph * static_cast<double>(zsign) * in[b];
  }
  return out;
}

void apply_into(const WeightedPauliSum& op, const StateVector& in, StateVector& out) {
  if (op.n_qubits() != in.n_qubits() || out.n_qubits() != in.n_qubits()) {
    throw std::invalid_argument("apply_into: operator/state size mismatch");
  }
  for (auto& a : out.amplitudes()) a = {0.0, 0.0};
  for (const auto& term : op) {
    std::uint64_t x = low_word(term.op.x_words());
    std::uint64_t z = low_word(term.op.z_words());
    std::complex<double> scale = term.op.phase() * term.coeff;
    for (std::uint64_t b = 0; b < in.size(); ++b) {
      int zsign = (std::popcount(z & b) & 1) ? -1 : 1;
      out[b ^ x] += scale * static_cast<double>(zsign) * in[b];
    }
  }
}

StateVector apply(const WeightedPauliSum& op, const StateVector& in) {
  StateVector out(in.n_qubits());
  apply_into(op, in, out);
  return out;
}

std::complex<double> expectation(const PauliString& op, const StateVector& state) {
  return inner(state, apply(op, state));
}

double expectation(const WeightedPauliSum& op, const StateVector& state) {
  return inner(state, apply(op, state)).real();
}

}  // namespace pepslab
