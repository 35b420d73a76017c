#include "pepslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace pepslab {

namespace {

void axpy(StateVector& y, std::complex<double> a, const StateVector& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// Real Pauli sums (no Y, real coefficients) cover every Hamiltonian built
// here; folding the diagonal terms into one vector and using real scalars for
// the rest makes the matvec several times cheaper than the generic apply.
struct CompiledOperator {
  struct OffDiagTerm {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    double scale = 0.0;
  };
  std::vector<double> diagonal;
  std::vector<OffDiagTerm> offdiag;
  bool usable = false;
};

CompiledOperator compile_operator(const WeightedPauliSum& h) {
  CompiledOperator c;
  const std::uint64_t dim = std::uint64_t{1} << h.n_qubits();
  std::vector<CompiledOperator::OffDiagTerm> diag_terms;
  for (const auto& term : h) {
    const std::complex<double> scale = term.op.phase() * term.coeff;
    if (scale.imag() != 0.0) return c;
    CompiledOperator::OffDiagTerm t;
    t.x = term.op.x_words().front();
    t.z = term.op.z_words().front();
    t.scale = scale.real();
    (t.x == 0 ? diag_terms : c.offdiag).push_back(t);
  }
  if (!diag_terms.empty()) {
    c.diagonal.assign(dim, 0.0);
    for (const auto& t : diag_terms) {
      for (std::uint64_t b = 0; b < dim; ++b) {
        c.diagonal[b] += (std::popcount(b & t.z) & 1) ? -t.scale : t.scale;
      }
    }
  }
  c.usable = true;
  return c;
}

void apply_compiled(const CompiledOperator& c, const StateVector& in, StateVector& out) {
  const std::uint64_t dim = in.size();
  if (c.diagonal.empty()) {
    for (std::uint64_t b = 0; b < dim; ++b) out[b] = {0.0, 0.0};
  } else {
    for (std::uint64_t b = 0; b < dim; ++b) out[b] = c.diagonal[b] * in[b];
  }
  for (const auto& t : c.offdiag) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      const double s = (std::popcount(b & t.z) & 1) ? -t.scale : t.scale;
      out[b ^ t.x] += s * in[b];
    }
  }
}

// Two-pass classical Gram-Schmidt against a set of orthonormal vectors.
void orthogonalize(StateVector& v, const std::vector<StateVector>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const StateVector& u : basis) {
      std::complex<double> c = inner(u, v);
      if (c != std::complex<double>{0.0, 0.0}) axpy(v, -c, u);
    }
  }
}

void gram_schmidt_pass(StateVector& v, const std::vector<StateVector>& a,
                       const std::vector<StateVector>& b) {
  for (const StateVector& u : a) axpy(v, -inner(u, v), u);
  for (const StateVector& u : b) axpy(v, -inner(u, v), u);
}

// One pass, repeated only while the norm keeps collapsing (the usual
// "twice is enough" criterion); saves a full sweep on the common path.
double orthogonalize_adaptive(StateVector& v, const std::vector<StateVector>& a,
                              const std::vector<StateVector>& b) {
  double before = v.norm();
  for (int pass = 0; pass < 3; ++pass) {
    gram_schmidt_pass(v, a, b);
    const double after = v.norm();
    if (after > 0.707 * before || after < 1e-14) return after;
    before = after;
  }
  return before;
}

StateVector random_vector(std::size_t n_qubits, std::mt19937_64& rng) {
  StateVector v(n_qubits);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {gauss(rng), gauss(rng)};
  return v;
}

}  // namespace

SpectrumReport low_spectrum(const WeightedPauliSum& h, int k, bool want_ground_vector,
                            const LowSpectrumOptions& options) {
  const std::size_t n = h.n_qubits();
  if (n == 0) throw std::invalid_argument("low_spectrum: empty operator");
  const std::size_t dim = std::size_t{1} << n;
  if (k < 1) throw std::invalid_argument("low_spectrum: k must be positive");
  const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(k), dim);

  SpectrumReport report;
  report.seed = options.seed;
  std::mt19937_64 rng(options.seed);

  std::vector<StateVector> vectors;  // converged, orthonormal
  std::vector<double> values;

  StateVector w(n), hv(n);
  const CompiledOperator compiled = compile_operator(h);
  auto matvec = [&](const StateVector& in, StateVector& out) {
    if (compiled.usable) {
      apply_compiled(compiled, in, out);
    } else {
      apply_into(h, in, out);
    }
    ++report.matvec_count;
  };

  int restarts = 0;
  int stalls = 0;
  int confirms = 0;
  StateVector carry(n);
  bool have_carry = false;
  // A Krylov space from a single start vector carries one direction per
  // degenerate eigenspace, so filling the quota is not enough: further
  // random-start sweeps of the deflated complement must confirm that nothing
  // lies below the current k-th value before the search may stop.
  while (true) {
    const bool quota_full = vectors.size() >= want;
    if (quota_full && (vectors.size() >= dim || confirms >= 2)) break;
    if (++restarts > options.max_restarts) {
      throw ConvergenceError(
          "low_spectrum: restart budget exhausted with " +
          std::to_string(vectors.size()) + "/" + std::to_string(want) +
          " eigenpairs converged");
    }

    double cutoff = std::numeric_limits<double>::infinity();
    if (quota_full) {
      std::vector<double> sorted = values;
      std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(want) - 1,
                       sorted.end());
      const double kth = sorted[want - 1];
      cutoff = kth + options.degeneracy_rel_tol * std::max(1.0, std::abs(kth));
    }

    // Warm-restart from the best unconverged Ritz vector when one is
    // available, otherwise reseed randomly (fresh random seeds are what
    // pick up further copies of a degenerate multiplet).
    StateVector v = have_carry ? carry : random_vector(n, rng);
    have_carry = false;
    orthogonalize(v, vectors);
    if (v.norm() < 1e-8) continue;  // essentially inside the deflated space
    v.normalize();

    const int m_max = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(options.max_basis),
                              dim - vectors.size()));
    if (m_max == 0) break;

    std::vector<StateVector> basis;
    basis.reserve(static_cast<std::size_t>(m_max));
    std::vector<double> alpha, beta;  // tridiagonal entries
    basis.push_back(v);

    // Expand the basis until the Ritz pairs that matter have small estimated
    // residuals (beta_m times the eigenvector's last component), checked every
    // few steps so cheap restarts stay cheap.
    auto solve_tridiagonal = [&](int m) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) {
          t(i, i + 1) = beta[static_cast<std::size_t>(i)];
          t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
      }
      return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(t);
    };
    const double est_tol = 0.5 * options.residual_tol;

    for (int j = 0; j < m_max; ++j) {
      matvec(basis[static_cast<std::size_t>(j)], w);
      double a = inner(basis[static_cast<std::size_t>(j)], w).real();
      alpha.push_back(a);
      axpy(w, {-a, 0.0}, basis[static_cast<std::size_t>(j)]);
      if (j > 0) axpy(w, {-beta[static_cast<std::size_t>(j - 1)], 0.0}, basis[static_cast<std::size_t>(j - 1)]);
      double b = orthogonalize_adaptive(w, vectors, basis);
      if (j + 1 >= m_max) break;
      if (b < 1e-13) break;  // exact invariant subspace

      const int m = j + 1;
      if (m >= 4 && (m % 4 == 0 || m + 1 == m_max)) {
        const auto probe = solve_tridiagonal(m);
        bool done = true;
        if (quota_full) {
          // Converged lowest Ritz value above the cutoff settles the run;
          // anything at or below it must be resolved too.
          for (int i = 0; i < m; ++i) {
            const double est = b * std::abs(probe.eigenvectors()(m - 1, i));
            if (est > est_tol) {
              done = false;
              break;
            }
            if (probe.eigenvalues()(i) > cutoff) break;
          }
        } else {
          // A single Krylov run rarely yields more than a handful of tight
          // pairs; stopping at eight keeps restarts cheap and lets the carry
          // vector resume the remainder.
          const int need =
              std::min({m, static_cast<int>(want - vectors.size()) + 2, 8});
          for (int i = 0; i < need; ++i) {
            if (b * std::abs(probe.eigenvectors()(m - 1, i)) > est_tol) {
              done = false;
              break;
            }
          }
        }
        if (done) break;
      }

      beta.push_back(b);
      StateVector next = w;
      next *= std::complex<double>(1.0 / b, 0.0);
      basis.push_back(std::move(next));
    }

    const int m = static_cast<int>(alpha.size());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver = solve_tridiagonal(m);

    // Assemble Ritz vectors for the lowest Ritz values and keep those whose
    // explicit residual passes; once the quota is full only values at or
    // below the cutoff matter.
    bool accepted_any = false;
    bool pending_below = false;
    const int n_candidates =
        quota_full ? m : std::min(m, static_cast<int>(want - vectors.size()) + 2);
    for (int i = 0; i < n_candidates; ++i) {
      if (solver.eigenvalues()(i) > cutoff) break;
      StateVector ritz(n);
      for (int j = 0; j < m; ++j) {
        axpy(ritz, {solver.eigenvectors()(j, i), 0.0}, basis[static_cast<std::size_t>(j)]);
      }
      orthogonalize(ritz, vectors);
      double nrm = ritz.norm();
      if (nrm < 1e-8) continue;
      ritz *= std::complex<double>(1.0 / nrm, 0.0);
      matvec(ritz, hv);
      double theta = inner(ritz, hv).real();
      axpy(hv, {-theta, 0.0}, ritz);
      double resid = hv.norm();
      if (resid <= options.residual_tol) {
        report.max_residual = std::max(report.max_residual, resid);
        vectors.push_back(ritz);
        values.push_back(theta);
        accepted_any = true;
      } else {
        // Keep the lowest unconverged Ritz vector to continue from.
        if (!have_carry) {
          carry = ritz;
          have_carry = true;
        }
        if (theta <= cutoff) pending_below = true;
        break;  // anything above this one is further from convergence
      }
    }
    if (quota_full) {
      confirms = (accepted_any || pending_below) ? 0 : confirms + 1;
    } else {
      stalls = accepted_any ? 0 : stalls + 1;
      if (stalls > 50) {
        throw ConvergenceError(
            "low_spectrum: no Ritz pair converged in 50 consecutive restarts");
      }
    }
  }

  // Sort the converged pairs and report exactly `want` of them.
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  report.energies.clear();
  for (std::size_t i = 0; i < want; ++i) {
    report.energies.push_back(values[order[i]]);
  }
  report.ground_energy = report.energies.front();
  if (want_ground_vector) {
    report.ground_vector = vectors[order[0]];
    report.has_ground_vector = true;
  }

  double scale = std::max(1.0, std::abs(report.ground_energy));
  double group_tol = options.degeneracy_rel_tol * scale;
  for (double e : report.energies) {
    if (report.level_energies.empty() || e - report.level_energies.back() > group_tol) {
      report.level_energies.push_back(e);
      report.degeneracies.push_back(1);
    } else {
      ++report.degeneracies.back();
    }
  }
  if (report.level_energies.size() > 1) {
    report.gap = report.level_energies[1] - report.level_energies[0];
    report.gap_resolved = true;
  } else {
    report.gap = std::numeric_limits<double>::quiet_NaN();
    report.gap_resolved = false;
  }
  return report;
}

LatticeFamily parse_family(const std::string& kind) {
  if (kind == "line" || kind == "ring") return LatticeFamily::kLine;
  if (kind == "hex") return LatticeFamily::kHex;
  if (kind == "square") return LatticeFamily::kSquare;
  if (kind == "cubic" || kind == "cubic-series") return LatticeFamily::kCubic;
  throw std::invalid_argument("parse_family: unknown lattice kind '" + kind + "'");
}

double closed_form_energy(LatticeFamily family, std::size_t n_sites,
                          const HamiltonianParams& params) {
  const double g = params.g;
  const double x = params.lambda / g;
  const double n = static_cast<double>(n_sites);
  switch (family) {
    case LatticeFamily::kLine:
      return -g * n * std::sqrt(1.0 + 4.0 * x * x);
    case LatticeFamily::kHex:
      // Even-parity sector of the triangle site model (the stabilized
      // sector); note the minus sign under the root.
      return -g * n * (1.0 + x + 2.0 * std::sqrt(x * x - x + 1.0));
    case LatticeFamily::kSquare:
      return -2.0 * g * n *
             std::sqrt(2.0 + 2.0 * x * x + 2.0 * std::sqrt(1.0 + x * x * x * x));
    case LatticeFamily::kCubic: {
      // Small-x series of the octahedron-site ground energy through x^6.
      double x2 = x * x;
      return -12.0 * g * n *
             (1.0 + x2 / 16.0 + x2 * x2 / 3072.0 +
              131.0 * x2 * x2 * x2 / 294912.0);
    }
  }
  throw std::logic_error("closed_form_energy: unreachable");
}

double closed_form_gap(LatticeFamily family, const HamiltonianParams& params) {
  const double g = params.g;
  const double x = params.lambda / g;
  switch (family) {
    case LatticeFamily::kLine:
      return g * (std::sqrt(1.0 + 4.0 * x * x) - 1.0);
    case LatticeFamily::kHex:
      return 2.0 * g *
             (x - std::sqrt(x * x + x + 1.0) + std::sqrt(x * x - x + 1.0));
    case LatticeFamily::kSquare:
      return g * (5.0 / 8.0) * x * x * x * x;  // leading order
    case LatticeFamily::kCubic:
      return g * (83.0 / 8192.0) * x * x * x * x * x * x;  // leading order
  }
  throw std::logic_error("closed_form_gap: unreachable");
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  if (x.size() < 4) throw std::invalid_argument("fit_power_law: need at least 4 samples");
  double xmin = *std::min_element(x.begin(), x.end());
  double xmax = *std::max_element(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) {
      throw std::domain_error("fit_power_law: samples must be strictly positive");
    }
  }
  if (xmax < 3.0 * xmin) {
    throw std::domain_error("fit_power_law: x range must span at least a factor 3");
  }

  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]);
    double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - slope * sx) / n;

  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = std::log(y[i]) - (slope * std::log(x[i]) + intercept);
    ss += r * r;
  }

  PowerLawFit fit;
  fit.exponent = slope;
  fit.coefficient = std::exp(intercept);
  fit.rms_log_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace pepslab
