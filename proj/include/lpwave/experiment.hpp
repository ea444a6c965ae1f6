#pragma once

#include "lpwave/bounds.hpp"
#include "lpwave/expansion.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lpwave {

struct ExperimentConfig {
  std::string model_spec;
  std::string basis_spec;
  std::string nfunction_spec;
  std::vector<TruncationScheme> schemes;  // nested, at least two
  double p = 2.0;
  double T = 1.0;
  double grid_L = 0.0;
  double grid_h = 0.0;
  long n_paths = 0;
  std::vector<double> epsilons;
  std::uint64_t seed = 0;
  double alpha = 0.5;  // spectral order for the rate constants
};

/// Strict parse: every field except "alpha" is required, unknown keys and
/// wrong types are rejected with the field name. Also runs validate_config.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Nesting, n_paths >= 100, [0, T] inside [-L, L], p >= 1, epsilons > 0.
void validate_config(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

struct ErrorSummary {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0, mean = 0.0;
};

/// Quantiles with linear interpolation between order statistics.
ErrorSummary summarize(const Eigen::VectorXd& values);

struct ExperimentResult {
  ExperimentConfig config;
  Eigen::MatrixXd errors;                          // scheme x path, L_p error integrals
  Eigen::MatrixXd empirical;                       // scheme x epsilon, exceedance frequency
  std::vector<double> rate_constants;              // uniform-route c_n per scheme
  std::vector<std::vector<TailBoundReport>> bounds;  // [scheme][epsilon]
  std::vector<ErrorSummary> summary;
};

/// Simulates the paths, reconstructs each scheme on [0, T] and compares the
/// exceedance frequencies with the tail bounds. Deterministic given cfg.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct TightnessEntry {
  long scheme_index = 0;
  double epsilon = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  double ratio = 0.0;   // empirical / bound
  double stderr_ = 0.0; // sqrt(f (1 - f) / n_paths)
  bool violation = false;  // empirical > bound + 3 stderr
};

/// One entry per (scheme, epsilon) with a valid bound. ValidationError when
/// there is none.
std::vector<TightnessEntry> tightness_report(const ExperimentResult& result);

/// Shortest round-trip decimal.
std::string format_double(double v);

void write_results_csv(const ExperimentResult& result, const std::filesystem::path& file);
void write_tails_csv(const ExperimentResult& result, const std::filesystem::path& file);
nlohmann::json report_json(const ExperimentResult& result);

/// `t,x` per line.
void write_path_csv(const SamplePath& path, const std::filesystem::path& file);
/// `level,j,k,value` with level phi or psi.
void write_coefficients_csv(const CoefficientSet& coeffs, const std::filesystem::path& file);

/// results.csv, tails.csv and report.json under dir.
void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace lpwave
