#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pepslab/hamiltonian.hpp"
#include "pepslab/lattice.hpp"
#include "pepslab/perturbation.hpp"
#include "pepslab/spectral.hpp"

namespace pepslab {

// Configuration problems (unparseable file, bad field, invalid combination),
// reported with the offending field; distinct from analysis check failures.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
  std::string lattice;     // built-in kind; empty when graph_file is set
  std::vector<int> dims;
  std::string boundary = "periodic";
  std::string graph_file;  // graph document path; exclusive with lattice
  double g = 1.0;
  std::vector<double> lambdas;
  // spectrum | duality-check | perturb[:order] | fidelity | gap-scan
  std::vector<std::string> analyses;
  int order = 4;           // expansion order when an analysis does not pin one
  std::string out_dir = "results";
  std::uint64_t seed = kDefaultSpectralSeed;
  std::uint64_t budget = kDefaultPathBudget;
  int threads = 0;         // 0 = machine parallelism
  std::string format = "csv";
};

// JSON config document; keys mirror the CLI flags ("lambda" accepts a
// number, a list, or a "start:stop:points" range string, same as the CLI).
ExperimentConfig load_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

// Throws ConfigError naming the first offending field.
void validate_config(const ExperimentConfig& config);

// "0.05", "0.05,0.1", or "0.01:0.05:9" (inclusive range with point count).
std::vector<double> parse_lambda_list(const std::string& text);
// "4" or "2,2" or "2x2".
std::vector<int> parse_dims(const std::string& text);

struct ResultRow {
  std::string lattice;  // instance id, e.g. "square-2x2" or a document name
  std::size_t n_sites;  // N_S (interior count on fixed-boundary lattices)
  double g = 0.0;
  double lambda = 0.0;
  std::string quantity;
  double value = 0.0;
  double paper_value = 0.0;  // NaN when the table defines no reference
  double deviation = 0.0;    // |relative| vs paper_value; NaN when undefined
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AnalysisOutput {
  std::string analysis;
  std::vector<ResultRow> rows;
  std::vector<CheckResult> checks;
};

struct ExperimentReport {
  std::vector<AnalysisOutput> analyses;
  bool all_passed = true;
};

// Pure compute: builds the lattice, runs every configured analysis over the
// lambda sweep (points fan out to a worker pool; assembly is sweep-ordered),
// and evaluates the tolerance checks.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Serializers for the stable column contract
// lattice,N_S,g,lambda,quantity,value,paper_value,deviation.
std::string format_rows_csv(const std::vector<ResultRow>& rows);
std::string format_rows_json(const std::vector<ResultRow>& rows);
std::string format_summary(const ExperimentReport& report);

// Writes one file per analysis plus summary.txt into config.out_dir;
// returns the paths written.
std::vector<std::string> emit(const ExperimentReport& report,
                              const ExperimentConfig& config);

// run_experiment + emit; returns the process exit status: 0 when every
// check passes, 1 otherwise.
int run_and_emit(const ExperimentConfig& config);

}  // namespace pepslab
