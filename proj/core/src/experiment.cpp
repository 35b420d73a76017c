#include "pepslab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pepslab/cluster.hpp"
#include "pepslab/duality.hpp"
#include "pepslab/reference.hpp"

namespace pepslab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int resolve_threads(const ExperimentConfig& config) {
  if (config.threads > 0) return config.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Strided fan-out over sweep indices; slot-indexed writes keep assembly
// order independent of completion order.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, threads < 1 ? 1 : static_cast<std::size_t>(threads));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&fn, w, workers, n] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    }));
  }
  for (auto& f : futures) f.get();
}

struct Context {
  const ExperimentConfig* config = nullptr;
  GraphSpec spec;
  std::string family;  // reference-table family; empty for graph documents
  std::string label;   // instance id for the lattice column
  std::size_t n_s = 0;
  int threads = 1;
};

ResultRow make_row(const Context& ctx, double lambda, std::string quantity,
                   double value, double paper = kNaN) {
  ResultRow row;
  row.lattice = ctx.label;
  row.n_sites = ctx.n_s;
  row.g = ctx.config->g;
  row.lambda = lambda;
  row.quantity = std::move(quantity);
  row.value = value;
  row.paper_value = paper;
  if (std::isnan(paper)) {
    row.deviation = kNaN;
  } else if (paper == 0.0) {
    row.deviation = std::abs(value);
  } else {
    row.deviation = std::abs(value - paper) / std::abs(paper);
  }
  return row;
}

void add_check(AnalysisOutput& out, const std::string& name, bool passed,
               const std::string& detail) {
  out.checks.push_back({name, passed, detail});
}

// Tolerance check against a reference-backed row.
void check_row(AnalysisOutput& out, const ResultRow& row, double tol) {
  if (std::isnan(row.paper_value)) return;
  const bool ok = row.deviation <= tol;
  add_check(out, row.quantity, ok,
            "value " + fmt_short(row.value) + " vs " + fmt_short(row.paper_value) +
                ", deviation " + fmt_short(row.deviation) + " (tol " + fmt_short(tol) + ")");
}

bool family_has_closed_form(const std::string& family) {
  return family == "ring" || family == "hex" || family == "square" ||
         family == "cubic";
}

LatticeFamily closed_form_family(const std::string& family) {
  if (family == "ring") return LatticeFamily::kLine;
  return parse_family(family);
}

// Grouping of an ascending spectrum into degenerate levels.
struct Levels {
  std::vector<double> energies;
  std::vector<int> degeneracy;
};

Levels group_levels(const std::vector<double>& ascending, double rel_tol) {
  Levels out;
  if (ascending.empty()) return out;
  const double scale = std::max(1.0, std::abs(ascending.front()));
  for (double e : ascending) {
    if (!out.energies.empty() && std::abs(e - out.energies.back()) <= rel_tol * scale) {
      ++out.degeneracy.back();
    } else {
      out.energies.push_back(e);
      out.degeneracy.push_back(1);
    }
  }
  return out;
}

std::vector<double> dual_spectrum(const Context& ctx, const HamiltonianParams& params,
                                  std::size_t k) {
  const auto models = site_dual_models(ctx.spec, params, 1);
  const auto levels = compose_spectrum(models, k);
  std::vector<double> out;
  out.reserve(levels.size());
  for (long double e : levels) out.push_back(static_cast<double>(e));
  return out;
}

// ---------------------------------------------------------------------------
// spectrum

AnalysisOutput spectrum_analysis(const Context& ctx) {
  AnalysisOutput out;
  out.analysis = "spectrum";
  const auto& lambdas = ctx.config->lambdas;
  const bool small = ctx.spec.n_qubits() <= 16;
  const std::size_t dim_cap = small ? (std::size_t{1} << ctx.spec.n_qubits())
                                    : std::numeric_limits<std::size_t>::max();
  const int k = static_cast<int>(std::min<std::size_t>(12, dim_cap));

  struct Point {
    Levels levels;
    double e0 = 0.0;
    double gap = kNaN;
  };
  std::vector<Point> points(lambdas.size());
  parallel_for(lambdas.size(), ctx.threads, [&](std::size_t i) {
    const HamiltonianParams params{ctx.config->g, lambdas[i]};
    Point p;
    std::vector<double> energies;
    if (small) {
      LowSpectrumOptions options;
      options.seed = ctx.config->seed;
      const auto report =
          low_spectrum(build_total_hamiltonian(ctx.spec, params), k, false, options);
      energies = report.energies;
    } else {
      energies = dual_spectrum(ctx, params, static_cast<std::size_t>(k));
    }
    p.levels = group_levels(energies, 1e-9);
    p.e0 = p.levels.energies.front();
    if (p.levels.energies.size() > 1) p.gap = p.levels.energies[1] - p.e0;
    points[i] = p;
  });

  const bool closed = family_has_closed_form(ctx.family);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const HamiltonianParams params{ctx.config->g, lambdas[i]};
    const auto& p = points[i];

    double paper_e0 = kNaN;
    double paper_gap = kNaN;
    if (closed) {
      const LatticeFamily fam = closed_form_family(ctx.family);
      paper_e0 = closed_form_energy(fam, ctx.spec.n_sites(), params);
      paper_gap = closed_form_gap(fam, params);
    }

    const auto e0_row = make_row(ctx, lambdas[i], "E0", p.e0, paper_e0);
    out.rows.push_back(e0_row);
    // The cubic closed form is a sixth-order truncation and the square gap
    // is leading-order, so only the exact expressions gate the run.
    if (ctx.family == "ring" || ctx.family == "hex" || ctx.family == "square") {
      check_row(out, e0_row, 1e-8);
    }
    if (!std::isnan(p.gap)) {
      const auto gap_row = make_row(ctx, lambdas[i], "gap", p.gap, paper_gap);
      out.rows.push_back(gap_row);
      if (ctx.family == "ring" || ctx.family == "hex") check_row(out, gap_row, 1e-8);
      out.rows.push_back(make_row(ctx, lambdas[i], "first_excited_degeneracy",
                                  static_cast<double>(p.levels.degeneracy[1])));
    }
    out.rows.push_back(make_row(ctx, lambdas[i], "ground_degeneracy",
                                static_cast<double>(p.levels.degeneracy[0])));
  }
  return out;
}

// ---------------------------------------------------------------------------
// duality-check

AnalysisOutput duality_analysis(const Context& ctx) {
  AnalysisOutput out;
  out.analysis = "duality-check";
  const auto& lambdas = ctx.config->lambdas;
  const bool small = ctx.spec.n_qubits() <= 16;
  const int k = small ? static_cast<int>(std::min<std::size_t>(
                            16, std::size_t{1} << ctx.spec.n_qubits()))
                      : 0;

  struct Point {
    bool terms_equal = false;
    bool involution = false;
    double max_dev = kNaN;
  };
  std::vector<Point> points(lambdas.size());
  parallel_for(lambdas.size(), ctx.threads, [&](std::size_t i) {
    const HamiltonianParams params{ctx.config->g, lambdas[i]};
    const auto h = build_total_hamiltonian(ctx.spec, params);
    const auto transformed = csign_conjugate(h, ctx.spec);
    Point p;
    p.terms_equal = same_terms(transformed, build_dual_hamiltonian(ctx.spec, params));
    p.involution = same_terms(csign_conjugate(transformed, ctx.spec), h);
    if (small) {
      LowSpectrumOptions options;
      options.seed = ctx.config->seed;
      const auto report = low_spectrum(h, k, false, options);
      const auto composed = dual_spectrum(ctx, params, report.energies.size());
      double dev = 0.0;
      for (std::size_t j = 0; j < report.energies.size(); ++j) {
        dev = std::max(dev, std::abs(report.energies[j] - composed[j]));
      }
      p.max_dev = dev;
    }
    points[i] = p;
  });

  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const auto& p = points[i];
    out.rows.push_back(make_row(ctx, lambdas[i], "term_match", p.terms_equal ? 1.0 : 0.0, 1.0));
    out.rows.push_back(make_row(ctx, lambdas[i], "involution", p.involution ? 1.0 : 0.0, 1.0));
    add_check(out, "term_match@lambda=" + fmt_short(lambdas[i]), p.terms_equal,
              "CSIGN image equals the decoupled-site Hamiltonian term-for-term");
    add_check(out, "involution@lambda=" + fmt_short(lambdas[i]), p.involution,
              "conjugating twice returns the original Hamiltonian");
    if (!std::isnan(p.max_dev)) {
      out.rows.push_back(make_row(ctx, lambdas[i], "spectrum_max_dev", p.max_dev, 0.0));
      add_check(out, "spectrum_match@lambda=" + fmt_short(lambdas[i]), p.max_dev <= 1e-10,
                "max |exact - composed| = " + fmt_short(p.max_dev) + " (tol 1e-10)");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// perturb

std::string bulk_class_label(const std::string& family) {
  if (family == "ring" || family == "line") return "c2";
  if (family == "hex") return "c3";
  if (family == "square") return "c4";
  if (family == "cubic") return "c6";
  return "";
}

double paper_delta_n1(int n1, const HamiltonianParams& params) {
  static const double offsets[5] = {0.0, 6.0, 8.0, 6.0, 0.0};
  const double g = params.g;
  const double l2 = params.lambda * params.lambda;
  const double l4 = l2 * l2;
  const double n = static_cast<double>(n1);
  return (2.0 * l2 / g - 6.0 * l4 / (g * g * g)) * n +
         2.0 * l4 / (g * g * g) * n * n + offsets[n1] * l4 / (g * g * g);
}

AnalysisOutput perturb_analysis(const Context& ctx, int order) {
  AnalysisOutput out;
  out.analysis = "perturb:" + std::to_string(order);
  const EnergySeries series = energy_series(ctx.spec, order, ctx.config->budget);
  const std::string bulk = bulk_class_label(ctx.family);
  const bool fixed_square = ctx.family == "square-fixed";

  // Zeroth order.  The published fixed-square constant term (-8g for the
  // four corners) disagrees with its own second-order corner count; the row
  // carries the published value and the deviation is left on display.
  {
    double paper = kNaN;
    if (family_has_closed_form(ctx.family)) {
      paper = closed_form_energy(closed_form_family(ctx.family), ctx.spec.n_sites(),
                                 {ctx.config->g, 0.0});
    } else if (ctx.family == "line") {
      paper = -ctx.config->g * static_cast<double>(ctx.n_s);
    } else if (fixed_square) {
      const double n = static_cast<double>(ctx.n_s);
      paper = ctx.config->g * (-4.0 * n - 12.0 * std::sqrt(n) - 8.0);
    }
    const auto row = make_row(ctx, 0.0, "E0_zeroth",
                              series.zeroth_per_g.to_double() * ctx.config->g, paper);
    out.rows.push_back(row);
    if (!fixed_square) check_row(out, row, 1e-12);
  }

  // Per-class expansion coefficients, units lambda^k/g^(k-1).
  for (const auto& cls : series.classes) {
    for (int k = 1; k <= order; ++k) {
      const auto& term = cls.series[static_cast<std::size_t>(k)];
      double paper_id = kNaN;
      double paper_st = kNaN;
      if (cls.label == bulk) {
        paper_id = reference_value(ctx.family,
                                   "theta" + std::to_string(k) + "_identity_per_site");
        paper_st = reference_value(ctx.family,
                                   "theta" + std::to_string(k) + "_stabilizer_per_site");
      } else if (cls.label == "boundary" && k == 1) {
        paper_st = reference_value(ctx.family, "theta1_boundary_stabilizer");
      }
      const auto id_row = make_row(ctx, 0.0, "theta" + std::to_string(k) + "[" + cls.label + "]_identity",
                                   term.identity.to_double(), paper_id);
      const auto st_row = make_row(ctx, 0.0, "theta" + std::to_string(k) + "[" + cls.label + "]_stabilizer",
                                   term.stabilizer.to_double(), paper_st);
      out.rows.push_back(id_row);
      out.rows.push_back(st_row);
      check_row(out, id_row, 1e-12);
      check_row(out, st_row, 1e-12);

      if (fixed_square) {
        const double paper_e = reference_value(
            ctx.family, "class_" + cls.label + "_E" + std::to_string(k));
        if (!std::isnan(paper_e)) {
          const auto row = make_row(
              ctx, 0.0, "E" + std::to_string(k) + "[" + cls.label + "]_per_site",
              (term.identity + term.stabilizer).to_double(), paper_e);
          out.rows.push_back(row);
          check_row(out, row, 1e-12);
        }
      }
    }
  }

  // Cluster-state energy corrections, totals per order.
  for (int k = 1; k <= order; ++k) {
    const double value = series.cluster_coeffs[static_cast<std::size_t>(k - 1)].to_double();
    double paper = kNaN;
    if (!ctx.family.empty()) {
      const double per_site =
          reference_value(ctx.family, "E" + std::to_string(k) + "_per_site");
      if (!std::isnan(per_site)) paper = per_site * static_cast<double>(ctx.n_s);
      if (ctx.family == "line" && k == 1) {
        const double per_boundary = reference_value("line", "E1_per_boundary");
        paper = 2.0 * per_boundary;
      }
      if (fixed_square) {
        const double n = static_cast<double>(ctx.n_s);
        const double rt = std::sqrt(n);
        if (k == 2) paper = -(n + 3.0 * rt + 8.0);
        if (k == 3) paper = -1.5 * rt;
        if (k == 4) paper = (-6.0 * n - 3.0 * rt + 128.0) / 16.0;
      }
    }
    const auto row =
        make_row(ctx, 0.0, "E" + std::to_string(k) + "_cluster", value, paper);
    out.rows.push_back(row);
    check_row(out, row, 1e-12);
  }

  // Stabilizer flip costs -2 b^(k) per class; the fixed-square corner story
  // is reported three ways below.
  for (const auto& cls : series.classes) {
    const auto costs = cls.flip_cost();
    for (int k = 1; k <= order; ++k) {
      const Rational& cost = costs[static_cast<std::size_t>(k - 1)];
      if (cost.is_zero()) continue;
      double paper = kNaN;
      if (fixed_square) {
        if (cls.label == "c3" && k == 3) paper = reference_value(ctx.family, "delta2_coeff");
        if (cls.label == "c4" && k == 4) paper = reference_value(ctx.family, "delta3_coeff");
        if (cls.label == "c2" && k == 2) paper = reference_value(ctx.family, "corner_flip_order2");
      } else if (cls.label == bulk && !ctx.family.empty()) {
        const double ord = reference_value(ctx.family, "gap_order");
        if (!std::isnan(ord) && static_cast<int>(ord) == k) {
          paper = reference_value(ctx.family, "gap_coeff");
        }
      } else if (cls.label == "boundary" && k == 1) {
        paper = reference_value(ctx.family, "boundary_gap_coeff");
      }
      const auto row = make_row(
          ctx, 0.0, "flip_cost_order" + std::to_string(k) + "[" + cls.label + "]",
          cost.to_double(), paper);
      out.rows.push_back(row);
      check_row(out, row, 1e-12);
    }
  }

  if (fixed_square && order >= 4) {
    // Published fourth-order corner slope vs the computed one (sign differs;
    // reported, not reconciled).
    const auto& corner = series.class_of("c2");
    const auto corner_costs = corner.flip_cost();
    const auto paper_row =
        make_row(ctx, 0.0, "flip_cost_order4[c2]_vs_paper",
                 corner_costs[3].to_double(),
                 reference_value(ctx.family, "corner_flip_order4_paper"));
    out.rows.push_back(paper_row);

    const SiteSpec& corner_site = ctx.spec.sites[static_cast<std::size_t>(corner.members.front())];
    std::vector<Rational> corner_series(corner_costs.begin(), corner_costs.end());
    for (double lambda : ctx.config->lambdas) {
      const HamiltonianParams params{ctx.config->g, lambda};
      const double engine = evaluate_series(corner_series, params);
      const double exact = static_cast<double>(site_gap(corner_site, params));
      for (int n1 = 1; n1 <= 4; ++n1) {
        const double paper = paper_delta_n1(n1, params);
        out.rows.push_back(make_row(ctx, lambda, "Delta(n1=" + std::to_string(n1) + ")",
                                    engine * n1, paper));
        out.rows.push_back(make_row(ctx, lambda,
                                    "Delta(n1=" + std::to_string(n1) + ")_dual_exact",
                                    exact * n1, paper));
      }
    }
    add_check(out, "delta_n1_report", true,
              "computed, published, and dual-exact Delta(n1) reported side by side");
  }
  return out;
}

// ---------------------------------------------------------------------------
// fidelity

AnalysisOutput fidelity_analysis(const Context& ctx) {
  AnalysisOutput out;
  out.analysis = "fidelity";
  const auto& lambdas = ctx.config->lambdas;
  const bool small = ctx.spec.n_qubits() <= 16;

  struct Point {
    PerSiteFidelityReport report;
    double direct = kNaN;
  };
  std::vector<Point> points(lambdas.size());
  parallel_for(lambdas.size(), ctx.threads, [&](std::size_t i) {
    const HamiltonianParams params{ctx.config->g, lambdas[i]};
    Point p;
    p.report = per_site_fidelity(ctx.spec, params, 1);
    if (small) {
      LowSpectrumOptions options;
      options.seed = ctx.config->seed;
      const auto spectrum =
          low_spectrum(build_total_hamiltonian(ctx.spec, params), 1, true, options);
      p.direct = fidelity(logical_cluster_state(ctx.spec), spectrum.ground_vector);
    }
    points[i] = p;
  });

  const double bound_ref = reference_value(ctx.family, "fidelity_bound_k");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double lambda = lambdas[i];
    const HamiltonianParams params{ctx.config->g, lambda};
    const auto& p = points[i];
    const double x = lambda / ctx.config->g;

    double paper_f = kNaN;
    if (ctx.family == "ring") {
      paper_f = paper_cluster_fidelity(ctx.family, ctx.spec.n_sites(), params);
    } else if (ctx.family == "line") {
      paper_f = paper_cluster_fidelity(ctx.family, p.report.n_logical, params);
    }

    const auto f_row = make_row(ctx, lambda, "fidelity", p.report.global_fidelity, paper_f);
    out.rows.push_back(f_row);
    if (ctx.family == "ring" && x <= 0.1 && !std::isnan(paper_f)) {
      const double dev = std::abs(p.report.global_fidelity - paper_f);
      const double tol = 5.0 * x * x * x * x;
      add_check(out, "ring_fidelity_formula@lambda=" + fmt_short(lambda), dev <= tol,
                "|F - 1/(1+N_S x^2)| = " + fmt_short(dev) + " (tol " + fmt_short(tol) + ")");
    }

    out.rows.push_back(make_row(ctx, lambda, "per_site_fidelity", p.report.per_site));
    const auto bound_row = make_row(ctx, lambda, "fidelity_bound_k", p.report.bound_k, bound_ref);
    out.rows.push_back(bound_row);
    check_row(out, bound_row, 1e-12);
    out.rows.push_back(make_row(ctx, lambda, "fidelity_bound_value", p.report.bound_value));
    out.rows.push_back(make_row(ctx, lambda, "first_order_per_site",
                                p.report.first_order_per_site));
    out.rows.push_back(make_row(ctx, lambda, "first_order_bound_satisfied",
                                p.report.first_order_bound_satisfied ? 1.0 : 0.0, 1.0));
    add_check(out, "per_site_bound_first_order@lambda=" + fmt_short(lambda),
              p.report.first_order_bound_satisfied,
              "d = " + fmt_short(p.report.first_order_per_site) + " vs bound " +
                  fmt_short(p.report.bound_value) + " (first-order corrected state)");
    // The exact ground state can undershoot the published bound at x^3/x^4;
    // reported as data, not gated.
    out.rows.push_back(make_row(ctx, lambda, "exact_bound_satisfied",
                                p.report.bound_satisfied ? 1.0 : 0.0));
    out.rows.push_back(make_row(ctx, lambda, "exact_bound_margin",
                                p.report.per_site - p.report.bound_value));

    if (!std::isnan(p.direct)) {
      const auto direct_row = make_row(ctx, lambda, "fidelity_direct", p.direct);
      out.rows.push_back(direct_row);
      const double dev = std::abs(p.direct - p.report.global_fidelity);
      add_check(out, "dual_vs_direct@lambda=" + fmt_short(lambda), dev <= 1e-9,
                "|direct - dual| = " + fmt_short(dev) + " (tol 1e-9)");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// gap-scan

const std::map<std::string, std::string>& gap_reference_families() {
  static const std::map<std::string, std::string> map = {
      {"c2", "ring"}, {"c3", "hex"}, {"c4", "square"}, {"c6", "cubic"}};
  return map;
}

AnalysisOutput gap_scan_analysis(const Context& ctx) {
  AnalysisOutput out;
  out.analysis = "gap-scan";
  const auto& lambdas = ctx.config->lambdas;
  // Order 1 skips path enumeration; this only classifies the sites.
  const EnergySeries classes = energy_series(ctx.spec, 1, ctx.config->budget);

  for (const auto& cls : classes.classes) {
    if (cls.boundary) continue;
    const SiteSpec& site = ctx.spec.sites[static_cast<std::size_t>(cls.members.front())];

    std::vector<double> gaps(lambdas.size());
    parallel_for(lambdas.size(), ctx.threads, [&](std::size_t i) {
      gaps[i] = static_cast<double>(
          site_gap(site, HamiltonianParams{ctx.config->g, lambdas[i]}));
    });

    std::vector<double> xs(lambdas.size());
    std::vector<double> ys(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      xs[i] = lambdas[i] / ctx.config->g;
      ys[i] = gaps[i] / ctx.config->g;
      out.rows.push_back(make_row(ctx, lambdas[i], "site_gap[" + cls.label + "]", gaps[i]));
    }

    const PowerLawFit fit = fit_power_law(xs, ys);
    std::string ref_family;
    if (site.intra_edges == default_intra_edges(site.coordination)) {
      const auto it = gap_reference_families().find(cls.label);
      if (it != gap_reference_families().end()) ref_family = it->second;
    }
    const double ref_order =
        ref_family.empty() ? kNaN : reference_value(ref_family, "gap_order");
    const double ref_coeff =
        ref_family.empty() ? kNaN : reference_value(ref_family, "gap_coeff");

    const auto exp_row =
        make_row(ctx, 0.0, "fit_exponent[" + cls.label + "]", fit.exponent, ref_order);
    const auto coeff_row =
        make_row(ctx, 0.0, "fit_coefficient[" + cls.label + "]", fit.coefficient, ref_coeff);
    out.rows.push_back(exp_row);
    out.rows.push_back(coeff_row);
    if (!std::isnan(ref_order)) {
      add_check(out, "gap_exponent[" + cls.label + "]",
                std::abs(fit.exponent - ref_order) <= 0.05,
                "fit " + fmt_short(fit.exponent) + " vs " + fmt_short(ref_order) +
                    " (tol 0.05)");
      add_check(out, "gap_coefficient[" + cls.label + "]", coeff_row.deviation <= 0.02,
                "fit " + fmt_short(fit.coefficient) + " vs " + fmt_short(ref_coeff) +
                    " (tol 2%)");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// config plumbing

struct AnalysisRequest {
  std::string name;
  int order = 0;
};

AnalysisRequest parse_analysis(const std::string& text, int default_order) {
  AnalysisRequest req;
  if (text == "spectrum" || text == "duality-check" || text == "fidelity" ||
      text == "gap-scan") {
    req.name = text;
    return req;
  }
  if (text == "perturb") {
    req.name = "perturb";
    req.order = default_order;
    return req;
  }
  if (text.rfind("perturb:", 0) == 0) {
    const std::string tail = text.substr(8);
    try {
      std::size_t pos = 0;
      const int k = std::stoi(tail, &pos);
      if (pos == tail.size() && k >= 1 && k <= kMaxExpansionOrder) {
        req.name = "perturb";
        req.order = k;
        return req;
      }
    } catch (const std::exception&) {
    }
    throw ConfigError("analyses: bad perturb order '" + tail + "' (expect 1.." +
                      std::to_string(kMaxExpansionOrder) + ")");
  }
  throw ConfigError("analyses: unknown analysis '" + text +
                    "' (expect spectrum | duality-check | perturb[:k] | fidelity | gap-scan)");
}

double parse_double_field(const std::string& text, const std::string& field) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field + ": cannot parse number '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

std::vector<double> parse_lambda_list(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
      throw ConfigError("lambda: range syntax is start:stop:points, got '" + text + "'");
    }
    const double start = parse_double_field(parts[0], "lambda");
    const double stop = parse_double_field(parts[1], "lambda");
    const long points = std::lround(parse_double_field(parts[2], "lambda"));
    if (points < 1) throw ConfigError("lambda: range needs at least 1 point");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
      out.push_back(start);
    } else {
      for (long i = 0; i < points; ++i) {
        out.push_back(start + (stop - start) * static_cast<double>(i) /
                                  static_cast<double>(points - 1));
      }
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) continue;
    out.push_back(parse_double_field(part, "lambda"));
  }
  if (out.empty()) throw ConfigError("lambda: empty list");
  return out;
}

std::vector<int> parse_dims(const std::string& text) {
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), 'x', ',');
  std::vector<int> out;
  for (const auto& part : split(normalized, ',')) {
    if (part.empty()) throw ConfigError("dims: empty segment in '" + text + "'");
    try {
      std::size_t pos = 0;
      const int v = std::stoi(part, &pos);
      if (pos != part.size()) throw std::invalid_argument("trailing characters");
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("dims: cannot parse '" + part + "'");
    }
  }
  if (out.empty()) throw ConfigError("dims: empty list");
  return out;
}

ExperimentConfig load_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig config;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "lattice") {
        config.lattice = value.get<std::string>();
      } else if (key == "dims") {
        if (value.is_string()) {
          config.dims = parse_dims(value.get<std::string>());
        } else {
          config.dims = value.get<std::vector<int>>();
        }
      } else if (key == "boundary") {
        config.boundary = value.get<std::string>();
      } else if (key == "graph") {
        config.graph_file = value.get<std::string>();
      } else if (key == "g") {
        config.g = value.get<double>();
      } else if (key == "lambda") {
        if (value.is_number()) {
          config.lambdas = {value.get<double>()};
        } else if (value.is_string()) {
          config.lambdas = parse_lambda_list(value.get<std::string>());
        } else {
          config.lambdas = value.get<std::vector<double>>();
        }
      } else if (key == "analyses" || key == "analysis") {
        if (value.is_string()) {
          config.analyses = {value.get<std::string>()};
        } else {
          config.analyses = value.get<std::vector<std::string>>();
        }
      } else if (key == "order") {
        config.order = value.get<int>();
      } else if (key == "out") {
        config.out_dir = value.get<std::string>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "budget") {
        config.budget = value.get<std::uint64_t>();
      } else if (key == "threads") {
        config.threads = value.get<int>();
      } else if (key == "format") {
        config.format = value.get<std::string>();
      } else {
        throw ConfigError("config: unknown field '" + key + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("config: field '" + key + "': " + e.what());
    }
  }
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_config(buffer.str());
}

void validate_config(const ExperimentConfig& config) {
  if (config.lattice.empty() == config.graph_file.empty()) {
    throw ConfigError("lattice: specify exactly one of a built-in kind or a graph file");
  }
  if (!config.lattice.empty() && config.dims.empty()) {
    throw ConfigError("dims: required for built-in lattices");
  }
  try {
    parse_boundary(config.boundary);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("boundary: ") + e.what());
  }
  if (!(config.g > 0.0)) throw ConfigError("g: must be positive");
  if (config.lambdas.empty()) throw ConfigError("lambda: at least one value required");
  for (double lambda : config.lambdas) {
    if (!(lambda > 0.0)) throw ConfigError("lambda: values must be positive");
  }
  if (config.analyses.empty()) throw ConfigError("analyses: at least one required");
  if (config.order < 1 || config.order > kMaxExpansionOrder) {
    throw ConfigError("order: must be 1.." + std::to_string(kMaxExpansionOrder));
  }
  if (config.format != "csv" && config.format != "json") {
    throw ConfigError("format: must be csv or json");
  }
  if (config.threads < 0) throw ConfigError("threads: must be >= 0");
  if (config.budget == 0) throw ConfigError("budget: must be positive");
  bool has_gap_scan = false;
  for (const auto& analysis : config.analyses) {
    parse_analysis(analysis, config.order);
    if (analysis == "gap-scan") has_gap_scan = true;
  }
  if (has_gap_scan) {
    const auto [lo, hi] =
        std::minmax_element(config.lambdas.begin(), config.lambdas.end());
    if (config.lambdas.size() < 4 || *hi < 3.0 * *lo) {
      throw ConfigError(
          "lambda: gap-scan needs at least 4 values spanning a factor of 3");
    }
  }
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate_config(config);

  Context ctx;
  ctx.config = &config;
  try {
    ctx.spec = config.graph_file.empty()
                   ? build_named(config.lattice, config.dims, parse_boundary(config.boundary))
                   : load_graph_file(config.graph_file);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("lattice: ") + e.what());
  }
  ctx.label = ctx.spec.name;
  ctx.n_s = ctx.spec.interior_count;
  ctx.threads = resolve_threads(config);
  if (config.graph_file.empty()) {
    const bool fixed = parse_boundary(config.boundary) == BoundaryKind::kFixed;
    if (config.lattice == "square" && fixed) {
      ctx.family = "square-fixed";
    } else if (config.lattice == "line" && !fixed) {
      ctx.family = "ring";
    } else {
      ctx.family = config.lattice;
    }
  }

  ExperimentReport report;
  for (const auto& text : config.analyses) {
    const AnalysisRequest request = parse_analysis(text, config.order);
    AnalysisOutput out;
    if (request.name == "spectrum") {
      out = spectrum_analysis(ctx);
    } else if (request.name == "duality-check") {
      out = duality_analysis(ctx);
    } else if (request.name == "perturb") {
      out = perturb_analysis(ctx, request.order);
    } else if (request.name == "fidelity") {
      out = fidelity_analysis(ctx);
    } else {
      out = gap_scan_analysis(ctx);
    }
    for (const auto& check : out.checks) report.all_passed &= check.passed;
    report.analyses.push_back(std::move(out));
  }
  return report;
}

std::string format_rows_csv(const std::vector<ResultRow>& rows) {
  std::string out = "lattice,N_S,g,lambda,quantity,value,paper_value,deviation\n";
  for (const auto& row : rows) {
    out += row.lattice;
    out += ',' + std::to_string(row.n_sites);
    out += ',' + fmt(row.g);
    out += ',' + fmt(row.lambda);
    out += ',' + row.quantity;
    out += ',' + fmt(row.value);
    out += ',';
    if (!std::isnan(row.paper_value)) out += fmt(row.paper_value);
    out += ',';
    if (!std::isnan(row.deviation)) out += fmt(row.deviation);
    out += '\n';
  }
  return out;
}

std::string format_rows_json(const std::vector<ResultRow>& rows) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json item;
    item["lattice"] = row.lattice;
    item["N_S"] = row.n_sites;
    item["g"] = row.g;
    item["lambda"] = row.lambda;
    item["quantity"] = row.quantity;
    item["value"] = row.value;
    if (std::isnan(row.paper_value)) {
      item["paper_value"] = nullptr;
      item["deviation"] = nullptr;
    } else {
      item["paper_value"] = row.paper_value;
      item["deviation"] = row.deviation;
    }
    doc.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

std::string format_summary(const ExperimentReport& report) {
  std::string out = "reference table version: ";
  out += kReferenceTableVersion;
  out += '\n';
  for (const auto& analysis : report.analyses) {
    for (const auto& check : analysis.checks) {
      out += '[' + analysis.analysis + "] " + check.name + ": " +
             (check.passed ? "pass" : "FAIL") + " — " + check.detail + '\n';
    }
  }
  out += std::string("overall: ") + (report.all_passed ? "pass" : "FAIL") + '\n';
  return out;
}

std::vector<std::string> emit(const ExperimentReport& report,
                              const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec && !fs::is_directory(config.out_dir)) {
    throw std::runtime_error("emit: cannot create output directory " + config.out_dir +
                             ": " + ec.message());
  }

  std::vector<std::string> written;
  auto write_file = [&](const std::string& name, const std::string& contents) {
    const fs::path path = fs::path(config.out_dir) / name;
    std::ofstream out_stream(path, std::ios::binary);
    if (!out_stream) throw std::runtime_error("emit: cannot write " + path.string());
    out_stream << contents;
    written.push_back(path.string());
  };

  for (const auto& analysis : report.analyses) {
    std::string stem = analysis.analysis;
    std::replace(stem.begin(), stem.end(), ':', '-');
    const std::string contents = config.format == "json"
                                     ? format_rows_json(analysis.rows)
                                     : format_rows_csv(analysis.rows);
    write_file(stem + "." + config.format, contents);
  }
  write_file("summary.txt", format_summary(report));
  return written;
}

int run_and_emit(const ExperimentConfig& config) {
  const ExperimentReport report = run_experiment(config);
  emit(report, config);
  return report.all_passed ? 0 : 1;
}

}  // namespace pepslab
