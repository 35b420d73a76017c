#include "pepslab/duality.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <queue>
#include <stdexcept>

#include <Eigen/Dense>

namespace pepslab {

PauliString csign_conjugate(const PauliString& op, const GraphSpec& spec) {
  QubitIndexMap map(spec);
  if (op.n_qubits() != map.total()) {
    throw std::invalid_argument("csign_conjugate: operator size mismatch");
  }
  PauliString out = op;
  for (const Bond& b : spec.bonds) {
    std::size_t qa = map.index(b.site_a, b.port_a);
    std::size_t qb = map.index(b.site_b, b.port_b);
    bool xa = out.x_bit(qa);
    bool xb = out.x_bit(qb);
    if (xa) out.set_z(qb, !out.z_bit(qb));
    if (xb) out.set_z(qa, !out.z_bit(qa));
    if (xa && xb) out.multiply_phase_power(2);
  }
  return out;
}

WeightedPauliSum csign_conjugate(const WeightedPauliSum& op, const GraphSpec& spec) {
  WeightedPauliSum out(op.n_qubits());
  for (const auto& term : op) {
    out.add_term(term.coeff, csign_conjugate(term.op, spec));
  }
  return out;
}

WeightedPauliSum build_dual_hamiltonian(const GraphSpec& spec,
                                        const HamiltonianParams& params) {
  QubitIndexMap map(spec);
  WeightedPauliSum h(map.total());
  for (std::size_t mu = 0; mu < spec.sites.size(); ++mu) {
    const SiteSpec& s = spec.sites[mu];
    for (const auto& [a, b] : s.intra_edges) {
      PauliString zz(map.total());
      zz.set_z(map.index(static_cast<int>(mu), a), true);
      zz.set_z(map.index(static_cast<int>(mu), b), true);
      h.add_term(-params.g, zz);
    }
    for (int port = 0; port < s.coordination; ++port) {
      h.add_term(-params.lambda,
                 PauliString::single(map.total(), map.index(static_cast<int>(mu), port), 'X'));
    }
  }
  return h;
}

bool same_terms(const WeightedPauliSum& a, const WeightedPauliSum& b, double coeff_tol) {
  if (a.n_qubits() != b.n_qubits()) return false;
  auto collect = [](const WeightedPauliSum& sum) {
    std::map<std::string, double> terms;
    for (const auto& t : sum.merged()) terms[t.op.str()] += t.coeff;
    return terms;
  };
  std::map<std::string, double> ta = collect(a);
  std::map<std::string, double> tb = collect(b);
  if (ta.size() != tb.size()) return false;
  for (const auto& [key, coeff] : ta) {
    auto it = tb.find(key);
    if (it == tb.end()) return false;
    if (std::abs(it->second - coeff) > coeff_tol) return false;
  }
  return true;
}

long double SiteDualModel::gap() const {
  const long double scale = std::max<long double>(1.0L, -eigenvalues.front());
  const long double tol = 1e-16L * scale;
  for (std::size_t i = 1; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] - eigenvalues.front() > tol) {
      return eigenvalues[i] - eigenvalues.front();
    }
  }
  throw std::domain_error("SiteDualModel: spectrum has no level above the ground level");
}

SiteDualModel solve_site_model(const SiteSpec& site, const HamiltonianParams& params) {
  if (site.coordination < 1 || site.coordination > 12) {
    throw std::invalid_argument("solve_site_model: coordination out of supported range");
  }
  const int c = site.coordination;
  const int dim = 1 << c;
  const int half = dim / 2;
  const int mask = dim - 1;

  // The model commutes with the flip-all operator, so it splits into parity
  // sectors on the basis (|r> ± |~r>)/sqrt(2), r < 2^(c-1).  Solving the
  // sectors separately keeps the near-degenerate ground pair an honest
  // difference of two well-separated sector grounds, which is what makes the
  // x^c splitting resolvable at small coupling.
  std::vector<long double> diag(static_cast<std::size_t>(half), 0.0L);
  for (int r = 0; r < half; ++r) {
    for (const auto& [a, b] : site.intra_edges) {
      int za = (r >> a) & 1;
      int zb = (r >> b) & 1;
      diag[static_cast<std::size_t>(r)] += (za == zb) ? -params.g : params.g;
    }
  }

  using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  SiteDualModel model;
  model.dim = dim;
  model.eigenvalues.reserve(static_cast<std::size_t>(dim));

  long double best_energy = 0.0L;
  std::vector<long double> best_vector;
  int best_sigma = 0;

  for (int sigma : {+1, -1}) {
    MatrixXld h = MatrixXld::Zero(half, half);
    for (int r = 0; r < half; ++r) {
      h(r, r) = diag[static_cast<std::size_t>(r)];
      for (int p = 0; p < c; ++p) {
        const int t = r ^ (1 << p);
        if (t < half) {
          h(t, r) += -params.lambda;
        } else {
          h(t ^ mask, r) += -params.lambda * sigma;
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXld> solver(h);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("solve_site_model: eigensolver failed");
    }
    for (int i = 0; i < half; ++i) model.eigenvalues.push_back(solver.eigenvalues()(i));
    if (best_sigma == 0 || solver.eigenvalues()(0) < best_energy) {
      best_energy = solver.eigenvalues()(0);
      best_vector.assign(solver.eigenvectors().col(0).data(),
                         solver.eigenvectors().col(0).data() + half);
      best_sigma = sigma;
    }
  }
  std::sort(model.eigenvalues.begin(), model.eigenvalues.end());

  const long double inv_sqrt2 = 0.70710678118654752440L;
  model.ground_vector.assign(static_cast<std::size_t>(dim), 0.0L);
  for (int r = 0; r < half; ++r) {
    const long double amp = best_vector[static_cast<std::size_t>(r)] * inv_sqrt2;
    model.ground_vector[static_cast<std::size_t>(r)] = amp;
    model.ground_vector[static_cast<std::size_t>(r ^ mask)] = amp * best_sigma;
  }
  return model;
}

std::vector<SiteDualModel> site_dual_models(const GraphSpec& spec,
                                            const HamiltonianParams& params,
                                            int threads) {
  std::vector<SiteDualModel> models(spec.n_sites());
  if (threads < 1) threads = 1;
  std::size_t n = spec.n_sites();
  auto worker = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      models[i] = solve_site_model(spec.sites[i], params);
      models[i].site = static_cast<int>(i);
    }
  };
  if (threads == 1 || n < 2) {
    worker(0, 1);
  } else {
    std::vector<std::future<void>> futures;
    std::size_t stride = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    futures.reserve(stride);
    for (std::size_t t = 0; t < stride; ++t) {
      futures.push_back(std::async(std::launch::async, worker, t, stride));
    }
    for (auto& f : futures) f.get();
  }
  return models;
}

long double site_gap(const SiteSpec& site, const HamiltonianParams& params) {
  return solve_site_model(site, params).gap();
}

namespace {

struct ComposeNode {
  long double energy;
  std::vector<int> levels;
  std::size_t last_changed;
  bool operator>(const ComposeNode& o) const { return energy > o.energy; }
};

}  // namespace

std::vector<long double> compose_spectrum(const std::vector<SiteDualModel>& models,
                                          std::size_t k) {
  if (models.empty()) return {};
  // Best-first merge over the product of the per-site sorted spectra.  A
  // successor may only raise levels at or after the last raised position, so
  // every level vector is generated exactly once; eigenvalues are ascending
  // per site, so successors never undercut their parent and the pop order is
  // globally sorted.
  std::priority_queue<ComposeNode, std::vector<ComposeNode>, std::greater<>> heap;
  ComposeNode root;
  root.levels.assign(models.size(), 0);
  root.last_changed = 0;
  root.energy = 0.0L;
  for (const SiteDualModel& m : models) {
    if (m.eigenvalues.empty()) {
      throw std::invalid_argument("compose_spectrum: site model with empty spectrum");
    }
    root.energy += m.eigenvalues.front();
  }
  heap.push(std::move(root));

  std::vector<long double> out;
  out.reserve(k);
  while (!heap.empty() && out.size() < k) {
    ComposeNode node = heap.top();
    heap.pop();
    out.push_back(node.energy);
    for (std::size_t j = node.last_changed; j < models.size(); ++j) {
      int next = node.levels[j] + 1;
      if (next >= static_cast<int>(models[j].eigenvalues.size())) continue;
      ComposeNode succ = node;
      succ.levels[j] = next;
      succ.last_changed = j;
      succ.energy = node.energy + models[j].eigenvalues[static_cast<std::size_t>(next)] -
                    models[j].eigenvalues[static_cast<std::size_t>(next - 1)];
      heap.push(std::move(succ));
    }
  }
  return out;
}

}  // namespace pepslab
