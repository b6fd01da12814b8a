// CLI: `run` executes a sweep from a config file (or defaults) and writes
// results + manifest; `oracle-check` runs the randomized property campaign
// against the enumeration oracle and exits nonzero on any failure.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "femtosim/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"femtocell cell-association and scheduling simulator"};
  app.require_subcommand(1);

  // run
  std::string config_path;
  std::string access = "";
  std::string out_dir = "out";
  std::string format = "csv";
  uint64_t seed = 0;
  bool seed_set = false;
  int runs = 0;
  auto* run_cmd = app.add_subcommand("run", "run an experiment sweep");
  run_cmd->add_option("--config", config_path, "JSON config file");
  run_cmd->add_option("--access", access, "open|closed|both")
      ->check(CLI::IsMember({"open", "closed", "both"}));
  run_cmd->add_option("--seed", seed, "base seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run_cmd->add_option("--runs", runs, "runs per sweep point");
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // oracle-check
  int trials = 200;
  int max_users = 8;
  uint64_t oracle_seed = 20240901;
  auto* oracle_cmd =
      app.add_subcommand("oracle-check", "property-test campaign vs. the oracle");
  oracle_cmd->add_option("--trials", trials, "number of random instances");
  oracle_cmd->add_option("--max-users", max_users, "largest instance size")
      ->check(CLI::Range(4, 10));
  oracle_cmd->add_option("--seed", oracle_seed, "campaign seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      femtosim::ExperimentPlan plan = config_path.empty()
                                          ? femtosim::default_plan()
                                          : femtosim::plan_from_file(config_path);
      if (!access.empty()) {
        if (access == "both") {
          plan.access_modes = {femtosim::AccessMode::open,
                               femtosim::AccessMode::closed};
        } else {
          plan.access_modes = {femtosim::access_mode_from_string(access)};
        }
      }
      if (seed_set) plan.base_seed = seed;
      if (runs > 0) plan.runs = runs;

      femtosim::SweepResult result = femtosim::run_experiment(plan);
      auto fmt = format == "json" ? femtosim::OutputFormat::json
                                  : femtosim::OutputFormat::csv;
      auto written = femtosim::write_outputs(result, plan, out_dir, fmt);
      for (const auto& path : written) std::cout << "wrote " << path << "\n";
      return 0;
    }
    femtosim::OracleCheckOptions options;
    options.trials = trials;
    options.max_users = max_users;
    options.seed = oracle_seed;
    int failures = femtosim::run_oracle_check(options, std::cout);
    return failures == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
