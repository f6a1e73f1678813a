#ifndef DECOPT_HARNESS_HPP
#define DECOPT_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decopt/consensus.hpp"
#include "decopt/netgraph.hpp"
#include "decopt/problems.hpp"

namespace decopt::harness {

// Thrown on malformed configs; message names the offending fields.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProblemSpec {
  std::string family = "quadratic";
  int m = 4;
  int n = 8;
  double kappa = 10.0;
  int samples_per_node = 16;
  double reg_mu = 0.0;
  std::uint64_t seed = 1;
};

struct GraphSpec {
  std::string family = "path";
  int m = 4;
  double drop_prob = 0.0;
  int window_b = 1;
  int rounds = 0;
  std::uint64_t seed = 2;
};

struct AlgorithmSpec {
  std::string id = "extra";
  int budget = 1000;
  double step_size = 0.0;   // 0 = default rule for the algorithm
  double eta = 0.0;         // acc_dngd; 0 = tuned by halving
  int consensus_t = 0;      // dagd_consensus; 0 = from the inexact-oracle formula
  double penalty_eps = 0.0; // sliding; 0 = targets.eps
  double c_constant = 0.1;
  long inner_cap = 100000;
  bool lifted = false;
  double sigma = 0.0;       // stochastic noise level where supported
  double box_radius = 10.0; // sliding box domain half-width
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  ProblemSpec problem;
  GraphSpec graph;
  AlgorithmSpec algorithm;
  double target_eps = 1e-6;
  std::optional<double> reference_value;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  std::string to_json_text() const;
};

const std::vector<std::string>& known_algorithms();

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 2 divergence
  std::string trace_csv;
  std::string summary_json;
  double final_f_residual = 0.0;
  double final_consensus_error = 0.0;
  std::uint64_t total_comm_rounds = 0;
  std::uint64_t total_oracle_calls = 0;
  int rounds_to_target = -1;   // communication rounds at first target hit
  int iters_to_target = -1;
  std::uint64_t oracle_to_target = 0;
};

// Deterministic under config.seed; when out_dir is nonempty writes
// trace.csv and summary.json there.
RunOutcome run_experiment(const ExperimentConfig& config,
                          const std::string& out_dir, bool quiet = true);

struct SweepPoint {
  double value = 0.0;      // swept setting
  double x = 0.0;          // actual abscissa (e.g. measured chi)
  double rounds_measure = 0.0;
  double oracle_measure = 0.0;
  bool ok = false;
  std::string error;
};

struct ScalingReport {
  std::string variable;
  std::vector<SweepPoint> points;
  double rounds_slope = 0.0;
  double oracle_slope = 0.0;
  bool complete = true;

  std::string to_json_text() const;
};

// variable: "eps" (solver target), "kappa" (problem conditioning) or
// "chi" (path length; the abscissa is the measured graph chi).
ScalingReport sweep(const ExperimentConfig& config_template,
                    const std::string& variable,
                    const std::vector<double>& values, int workers = 1,
                    const std::string& out_dir = "");

double fit_loglog_slope(const std::vector<double>& xs,
                        const std::vector<double>& ys);

}  // namespace decopt::harness

#endif
