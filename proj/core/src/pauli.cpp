#include "pepslab/pauli.hpp"

#include <bit>
#include <stdexcept>
#include <unordered_map>

namespace pepslab {

namespace {

std::size_t overlap_popcount(const std::vector<std::uint64_t>& a,
                             const std::vector<std::uint64_t>& b) {
  std::size_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
  }
  return total;
}

}  // namespace

PauliString::PauliString(std::size_t n_qubits)
    : n_(n_qubits), phase_(0), x_(word_count(n_qubits), 0), z_(word_count(n_qubits), 0) {}

PauliString PauliString::single(std::size_t n_qubits, std::size_t qubit, char axis) {
  PauliString p(n_qubits);
  p.check_qubit(qubit);
  switch (axis) {
    case 'X':
      p.set_x(qubit, true);
      break;
    case 'Z':
      p.set_z(qubit, true);
      break;
    case 'Y':
      p.set_x(qubit, true);
      p.set_z(qubit, true);
      p.phase_ = 1;  // Y = i XZ
      break;
    default:
      throw std::invalid_argument("PauliString::single: axis must be X, Y or Z");
  }
  return p;
}

PauliString PauliString::from_masks(std::size_t n_qubits,
                                    std::vector<std::uint64_t> x_bits,
                                    std::vector<std::uint64_t> z_bits,
                                    int phase_power) {
  PauliString p(n_qubits);
  x_bits.resize(word_count(n_qubits), 0);
  z_bits.resize(word_count(n_qubits), 0);
  p.x_ = std::move(x_bits);
  p.z_ = std::move(z_bits);
  p.phase_ = static_cast<std::uint8_t>(((phase_power % 4) + 4) % 4);
  return p;
}

void PauliString::check_qubit(std::size_t qubit) const {
  if (qubit >= n_) throw std::out_of_range("PauliString: qubit index out of range");
}

bool PauliString::x_bit(std::size_t qubit) const {
  check_qubit(qubit);
  return (x_[qubit / 64] >> (qubit % 64)) & 1u;
}

bool PauliString::z_bit(std::size_t qubit) const {
  check_qubit(qubit);
  return (z_[qubit / 64] >> (qubit % 64)) & 1u;
}

void PauliString::set_x(std::size_t qubit, bool value) {
  check_qubit(qubit);
  std::uint64_t mask = std::uint64_t{1} << (qubit % 64);
  if (value)
    x_[qubit / 64] |= mask;
  else
    x_[qubit / 64] &= ~mask;
}

void PauliString::set_z(std::size_t qubit, bool value) {
  check_qubit(qubit);
  std::uint64_t mask = std::uint64_t{1} << (qubit % 64);
  if (value)
    z_[qubit / 64] |= mask;
  else
    z_[qubit / 64] &= ~mask;
}

std::complex<double> PauliString::phase() const {
  static const std::complex<double> table[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  return table[phase_];
}

PauliString PauliString::operator*(const PauliString& rhs) const {
  if (n_ != rhs.n_) throw std::invalid_argument("PauliString: size mismatch in product");
  PauliString out(n_);
  // Moving Z^{z_lhs} through X^{x_rhs} costs (-1)^{|z_lhs & x_rhs|}.
  std::size_t swaps = overlap_popcount(z_, rhs.x_);
  out.phase_ = static_cast<std::uint8_t>((phase_ + rhs.phase_ + 2 * (swaps % 2)) % 4);
  for (std::size_t w = 0; w < x_.size(); ++w) {
    out.x_[w] = x_[w] ^ rhs.x_[w];
    out.z_[w] = z_[w] ^ rhs.z_[w];
  }
  return out;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (n_ != other.n_) throw std::invalid_argument("PauliString: size mismatch in commutator");
  std::size_t parity =
      overlap_popcount(x_, other.z_) + overlap_popcount(z_, other.x_);
  return parity % 2 == 0;
}

bool PauliString::is_identity() const {
  for (std::size_t w = 0; w < x_.size(); ++w) {
    if (x_[w] != 0 || z_[w] != 0) return false;
  }
  return true;
}

std::size_t PauliString::weight() const {
  std::size_t total = 0;
  for (std::size_t w = 0; w < x_.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(x_[w] | z_[w]));
  }
  return total;
}

bool PauliString::is_hermitian() const {
  // i^k X^x Z^z equals i^{k-|x&z|} times a tensor of X/Y/Z factors, which is
  // Hermitian exactly when that leftover power of i is real.
  std::size_t y_count = overlap_popcount(x_, z_);
  return ((phase_ + 4 - (y_count % 4)) % 2) == 0;
}

int PauliString::hermitian_sign() const {
  std::size_t y_count = overlap_popcount(x_, z_);
  int residual = static_cast<int>((phase_ + 8 - (y_count % 4)) % 4);
  if (residual == 0) return 1;
  if (residual == 2) return -1;
  throw std::domain_error("PauliString: not Hermitian, no sign defined");
}

PauliString PauliString::without_sign() const {
  PauliString p = *this;
  std::size_t y_count = overlap_popcount(x_, z_);
  p.phase_ = static_cast<std::uint8_t>(y_count % 4);
  return p;
}

std::string PauliString::str() const {
  std::size_t y_count = overlap_popcount(x_, z_);
  int residual = static_cast<int>((phase_ + 8 - (y_count % 4)) % 4);
  static const char* prefix[4] = {"+", "+i", "-", "-i"};
  std::string out = prefix[residual];
  for (std::size_t q = 0; q < n_; ++q) {
    bool x = x_bit(q), z = z_bit(q);
    out += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return out;
}

bool PauliString::operator==(const PauliString& other) const {
  return n_ == other.n_ && phase_ == other.phase_ && x_ == other.x_ && z_ == other.z_;
}

std::size_t PauliString::MaskHash::operator()(const PauliString& p) const {
  std::size_t h = p.n_qubits() * 0x9e3779b97f4a7c15ull;
  for (std::size_t w = 0; w < p.x_words().size(); ++w) {
    h ^= p.x_words()[w] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= p.z_words()[w] + 0x517cc1b727220a95ull + (h << 6) + (h >> 2);
  }
  return h;
}

void WeightedPauliSum::add_term(double coeff, const PauliString& op) {
  if (n_ == 0 && terms_.empty()) n_ = op.n_qubits();
  if (op.n_qubits() != n_) {
    throw std::invalid_argument("WeightedPauliSum: term size mismatch");
  }
  if (!op.is_hermitian()) {
    throw std::invalid_argument("WeightedPauliSum: term is not Hermitian");
  }
  terms_.push_back({coeff * op.hermitian_sign(), op.without_sign()});
}

void WeightedPauliSum::add(const WeightedPauliSum& other) {
  for (const Term& t : other.terms_) add_term(t.coeff, t.op);
}

void WeightedPauliSum::scale(double factor) {
  for (Term& t : terms_) t.coeff *= factor;
}

WeightedPauliSum WeightedPauliSum::merged(double tol) const {
  WeightedPauliSum out(n_);
  std::unordered_map<PauliString, std::size_t, PauliString::MaskHash> index;
  for (const Term& t : terms_) {
    auto it = index.find(t.op);
    if (it == index.end()) {
      index.emplace(t.op, out.terms_.size());
      out.terms_.push_back(t);
    } else {
      out.terms_[it->second].coeff += t.coeff;
    }
  }
  std::vector<Term> kept;
  kept.reserve(out.terms_.size());
  for (const Term& t : out.terms_) {
    if (std::abs(t.coeff) > tol) kept.push_back(t);
  }
  out.terms_ = std::move(kept);
  return out;
}

}  // namespace pepslab
