#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pepslab/experiment.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{
      "pepslab-run — sweep PEPS parent Hamiltonians on a lattice or graph "
      "document and emit per-analysis tables plus a pass/fail summary"};

  std::string config_path;
  std::string lattice;
  std::string dims_text;
  std::string boundary;
  std::string graph_path;
  double g = 0.0;
  std::string lambda_text;
  std::vector<std::string> analyses;
  int order = 0;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  int threads = -1;
  std::string format;

  app.add_option("--config", config_path, "JSON config file; flags override its fields")
      ->check(CLI::ExistingFile);
  auto* lattice_opt =
      app.add_option("--lattice", lattice, "Built-in lattice kind (ring|line|hex|square|cubic)");
  auto* dims_opt =
      app.add_option("--dims", dims_text, "Lattice dimensions, e.g. 4 or 2,2 or 2x2x2");
  auto* boundary_opt =
      app.add_option("--boundary", boundary, "Boundary condition (periodic|fixed)");
  auto* graph_opt =
      app.add_option("--graph", graph_path, "Graph document (JSON) instead of --lattice");
  auto* g_opt = app.add_option("--g", g, "Intra-site coupling g > 0");
  auto* lambda_opt = app.add_option(
      "--lambda", lambda_text, "Bond coupling(s): value, comma list, or start:stop:points");
  auto* analysis_opt = app.add_option(
      "--analysis", analyses,
      "Analysis to run (repeatable): spectrum | duality-check | perturb[:k] | "
      "fidelity | gap-scan");
  auto* order_opt = app.add_option("--order", order, "Default expansion order for perturb");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Spectral solver seed");
  auto* budget_opt = app.add_option("--budget", budget, "Path-enumeration budget");
  auto* threads_opt =
      app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  auto* format_opt = app.add_option("--format", format, "Table format (csv|json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    pepslab::ExperimentConfig config;
    if (!config_path.empty()) config = pepslab::load_config_file(config_path);
    if (*lattice_opt) config.lattice = lattice;
    if (*dims_opt) config.dims = pepslab::parse_dims(dims_text);
    if (*boundary_opt) config.boundary = boundary;
    if (*graph_opt) config.graph_file = graph_path;
    if (*g_opt) config.g = g;
    if (*lambda_opt) config.lambdas = pepslab::parse_lambda_list(lambda_text);
    if (*analysis_opt) config.analyses = analyses;
    if (*order_opt) config.order = order;
    if (*out_opt) config.out_dir = out_dir;
    if (*seed_opt) config.seed = seed;
    if (*budget_opt) config.budget = budget;
    if (*threads_opt) config.threads = threads;
    if (*format_opt) config.format = format;

    const pepslab::ExperimentReport report = pepslab::run_experiment(config);
    pepslab::emit(report, config);
    std::cout << pepslab::format_summary(report);
    return report.all_passed ? 0 : 1;
  } catch (const pepslab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
