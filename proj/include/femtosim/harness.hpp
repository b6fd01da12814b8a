#pragma once

// Experiment driver: seeded scenario sweeps over the user count, all five
// association algorithms on identical scenarios, mean / 95% confidence
// aggregation over runs, and CSV/JSON output with a run manifest.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "femtosim/metrics.hpp"
#include "femtosim/model.hpp"

namespace femtosim {

inline constexpr const char* kVersion = "femtosim 0.1.0";

// canonical algorithm tags, in reporting order
const std::vector<std::string>& algorithm_tags();

enum class OutputFormat { csv, json };

struct ExperimentPlan {
  ScenarioConfig scenario;  // num_users is overridden by the sweep
  std::vector<int> user_counts = {30, 40, 50, 60, 70, 80};
  int runs = 10;
  uint64_t base_seed = 1;
  std::vector<AccessMode> access_modes = {AccessMode::open};
  std::vector<std::string> algorithms = algorithm_tags();
  double rounding_rho = 5.0;
  // absolute service-time threshold for the randomized scheme; <= 0 selects
  // a per-scenario value (5x the median best service time)
  double randomized_lambda = 0.0;
};

struct MetricStats {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  bool operator==(const MetricStats&) const = default;
};

struct SweepRow {
  AccessMode access = AccessMode::open;
  int num_users = 0;
  std::string algorithm;
  std::string metric;
  MetricStats stats;

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  bool operator==(const SweepResult&) const = default;
  const SweepRow* find(AccessMode access, int num_users,
                       const std::string& algorithm,
                       const std::string& metric) const;
};

// one algorithm's metric values for a single (scenario, seed) run
struct AlgorithmRun {
  std::string algorithm;
  std::map<std::string, double> metrics;
};

// Runs every algorithm of the plan on the identical scenario generated from
// (plan.scenario with num_users, seed). Also emits the "rlp_bound" row.
std::vector<AlgorithmRun> run_single(const ExperimentPlan& plan,
                                     AccessMode access, int num_users,
                                     uint64_t seed);

SweepResult run_experiment(const ExperimentPlan& plan);

// mean with two-sided Student-t 95% interval over the samples
MetricStats aggregate(const std::vector<double>& samples);
double student_t_975(int degrees_of_freedom);

void write_csv(const SweepResult& result, std::ostream& out);
std::string sweep_to_json(const SweepResult& result);
SweepResult sweep_from_json(const std::string& text);

// Writes results.{csv|json} plus manifest.json into out_dir (created if
// missing); returns the written paths.
std::vector<std::string> write_outputs(const SweepResult& result,
                                       const ExperimentPlan& plan,
                                       const std::string& out_dir,
                                       OutputFormat format);

ExperimentPlan default_plan();
// Parses the JSON config document; unknown keys are rejected. Missing keys
// keep their defaults.
ExperimentPlan plan_from_json(const std::string& text);
ExperimentPlan plan_from_file(const std::string& path);
std::string plan_to_json(const ExperimentPlan& plan);

// Property-test campaign behind the `oracle-check` CLI verb: random small
// instances checked against the enumeration oracle (approximation ratios,
// bound chain, LP feasibility), exhaustive-permutation SPT checks, and the
// randomized-scheme invariants. Returns the number of failed checks.
struct OracleCheckOptions {
  int trials = 200;
  int max_users = 8;
  uint64_t seed = 20240901;
};
int run_oracle_check(const OracleCheckOptions& options, std::ostream& log);

}  // namespace femtosim
