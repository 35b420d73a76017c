#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pepslab {

// Pauli operator on n qubits in symplectic form,
//
//   P = i^k * prod_q X_q^{x_q} * prod_q Z_q^{z_q},   k in {0,1,2,3}.
//
// Bit q of the x/z masks refers to global qubit q.  Basis states are
// labelled little-endian: bit q of a basis index is the value of qubit q.
// The phase is tracked exactly as the two-bit exponent k, so products of
// Pauli strings are exact; no floating point enters until an operator is
// applied to a state.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_qubits);  // identity

  // Single-qubit X/Y/Z embedded in n qubits.  Y is stored as i*XZ.
  static PauliString single(std::size_t n_qubits, std::size_t qubit, char axis);
  static PauliString from_masks(std::size_t n_qubits,
                                std::vector<std::uint64_t> x_bits,
                                std::vector<std::uint64_t> z_bits,
                                int phase_power = 0);

  std::size_t n_qubits() const { return n_; }
  bool x_bit(std::size_t qubit) const;
  bool z_bit(std::size_t qubit) const;
  void set_x(std::size_t qubit, bool value);
  void set_z(std::size_t qubit, bool value);
  const std::vector<std::uint64_t>& x_words() const { return x_; }
  const std::vector<std::uint64_t>& z_words() const { return z_; }

  // Phase exponent k with P = i^k X^x Z^z.
  int phase_power() const { return phase_; }
  void multiply_phase_power(int k) { phase_ = static_cast<std::uint8_t>((phase_ + (k % 4) + 4) % 4); }
  std::complex<double> phase() const;

  PauliString operator*(const PauliString& rhs) const;
  bool commutes_with(const PauliString& other) const;

  bool is_identity() const;          // trivial masks, any phase
  std::size_t weight() const;        // number of qubits acted on
  bool is_hermitian() const;         // equals a +/-1 multiple of an X/Y/Z tensor
  int hermitian_sign() const;        // the +/-1; requires is_hermitian()
  PauliString without_sign() const;  // Hermitian representative with sign +1

  // "+XZIY" style rendering, qubit 0 leftmost; "+i"/"-i" prefix when the
  // phase is imaginary.
  std::string str() const;

  bool operator==(const PauliString& other) const;
  bool operator!=(const PauliString& other) const { return !(*this == other); }

  struct MaskHash {
    std::size_t operator()(const PauliString& p) const;
  };

 private:
  static std::size_t word_count(std::size_t n) { return (n + 63) / 64; }
  void check_qubit(std::size_t qubit) const;

  std::size_t n_ = 0;
  std::uint8_t phase_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
};

// A Hermitian operator stored as a real-weighted sum of Pauli strings.
// Terms keep the convention coeff * (tensor of X/Y/Z): any +/-1 sign of a
// Hermitian Pauli string is folded into the coefficient on insertion, and
// non-Hermitian strings are rejected.
class WeightedPauliSum {
 public:
  struct Term {
    double coeff;
    PauliString op;
  };

  WeightedPauliSum() = default;
  explicit WeightedPauliSum(std::size_t n_qubits) : n_(n_qubits) {}

  std::size_t n_qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  const Term& term(std::size_t i) const { return terms_[i]; }
  const std::vector<Term>& terms() const { return terms_; }

  void add_term(double coeff, const PauliString& op);
  void add(const WeightedPauliSum& other);
  void scale(double factor);

  // Coefficient-merged copy: equal Pauli strings combined, zero terms
  // (|coeff| <= tol) dropped, term order deterministic (first appearance).
  WeightedPauliSum merged(double tol = 0.0) const;

  std::vector<Term>::const_iterator begin() const { return terms_.begin(); }
  std::vector<Term>::const_iterator end() const { return terms_.end(); }

 private:
  std::size_t n_ = 0;
  std::vector<Term> terms_;
};

}  // namespace pepslab
