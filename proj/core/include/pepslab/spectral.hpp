#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pepslab/hamiltonian.hpp"
#include "pepslab/pauli.hpp"
#include "pepslab/state.hpp"

namespace pepslab {

struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct SpectrumReport {
  std::vector<double> energies;        // k lowest, ascending, with multiplicity
  std::vector<double> level_energies;  // one entry per resolved level
  std::vector<int> degeneracies;       // multiplicities per resolved level
  double ground_energy = 0.0;
  // First resolved level above the (possibly degenerate) ground level.
  // Undefined (quiet NaN) when all k computed states sit in one level.
  double gap = 0.0;
  bool gap_resolved = false;
  StateVector ground_vector{0};  // populated when requested
  bool has_ground_vector = false;
  std::uint64_t seed = 0;
  int matvec_count = 0;
  double max_residual = 0.0;
};

inline constexpr std::uint64_t kDefaultSpectralSeed = 0x5eed0cafefeedULL;

struct LowSpectrumOptions {
  std::uint64_t seed = kDefaultSpectralSeed;
  double residual_tol = 1e-9;        // ||H v - E v|| per accepted pair
  double degeneracy_rel_tol = 1e-7;  // level grouping, relative to energy scale
  int max_basis = 96;                // Krylov basis per restart cycle
  int max_restarts = 400;
};

// k lowest eigenpairs of a Hermitian Pauli sum by restarted Lanczos with
// full reorthogonalization and deflation of converged vectors; matrix-free,
// deterministic for a fixed seed.  Degenerate multiplets are collected one
// vector per restart.  Throws ConvergenceError when restarts are exhausted.
SpectrumReport low_spectrum(const WeightedPauliSum& h, int k,
                            bool want_ground_vector = false,
                            const LowSpectrumOptions& options = {});

enum class LatticeFamily { kLine, kHex, kSquare, kCubic };
LatticeFamily parse_family(const std::string& kind);

// Closed-form ground energy per the dual decoupled-site solutions, as a
// function of n_sites sites (periodic lattices).  Line, hex and square are
// exact; cubic is the small-x series through x^6, x = lambda/g.
double closed_form_energy(LatticeFamily family, std::size_t n_sites,
                          const HamiltonianParams& params);

// Excitation gap: exact for line and hex, leading order in lambda/g for
// square (5/8 x^4 g) and cubic (83/8192 x^6 g), whose exact forms are not
// reproduced here.
double closed_form_gap(LatticeFamily family, const HamiltonianParams& params);

struct PowerLawFit {
  double exponent = 0.0;
  double coefficient = 0.0;
  double rms_log_residual = 0.0;
};

// Least-squares fit of y = coefficient * x^exponent on log-log axes.
// Requires >= 4 samples, strictly positive data, and an x span of at least
// a factor 3.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pepslab
