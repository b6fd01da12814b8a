#include "femtosim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "femtosim/association.hpp"
#include "femtosim/lp.hpp"
#include "femtosim/rng.hpp"
#include "femtosim/scheduling.hpp"

namespace femtosim {

namespace {

using nlohmann::ordered_json;

constexpr const char* kBoundTag = "rlp_bound";

const std::vector<std::string>& metric_order() {
  static const std::vector<std::string> order = {
      "makespan", "waiting", "jain", "runtime", "expected_makespan"};
  return order;
}

bool uses_spt(const std::string& algorithm) {
  // greedy, randomized and sequential fixing are paired with the optimal
  // scheduler; selfish and rounding keep the random-order baseline
  return algorithm == "sequential_fixing" || algorithm == "greedy" ||
         algorithm == "randomized";
}

uint64_t derived_seed(uint64_t seed, size_t index) {
  return seed * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(index) + 1;
}

double auto_lambda(const ServiceTimeProblem& problem) {
  std::vector<double> best = problem.t_min;
  std::sort(best.begin(), best.end());
  return 5.0 * best[best.size() / 2];
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& algorithm_tags() {
  static const std::vector<std::string> tags = {
      "sequential_fixing", "rounding", "greedy", "randomized", "selfish"};
  return tags;
}

std::vector<AlgorithmRun> run_single(const ExperimentPlan& plan,
                                     AccessMode access, int num_users,
                                     uint64_t seed) {
  ScenarioConfig config = plan.scenario;
  config.access = access;
  config.num_users = num_users;

  const Scenario scenario = generate_scenario(config, seed);
  const ServiceTimeProblem problem = build_problem(scenario);
  const double lambda = plan.randomized_lambda > 0.0 ? plan.randomized_lambda
                                                     : auto_lambda(problem);

  std::vector<AlgorithmRun> out;
  for (size_t i = 0; i < plan.algorithms.size(); ++i) {
    const std::string& tag = plan.algorithms[i];
    auto started = std::chrono::steady_clock::now();
    Assignment assignment;
    double expected_makespan = -1.0;
    if (tag == "sequential_fixing") {
      assignment = sequential_fixing(problem);
    } else if (tag == "rounding") {
      assignment = rounding_approximation(problem, plan.rounding_rho);
    } else if (tag == "greedy") {
      assignment = greedy(problem);
    } else if (tag == "randomized") {
      ExpectedLoadState state = randomized_reduce(problem, lambda);
      expected_makespan = state.max_expected_load();
      assignment = randomized_assign(state, problem, derived_seed(seed, i));
    } else if (tag == "selfish") {
      assignment = selfish(problem);
    } else {
      throw std::invalid_argument("unknown algorithm: " + tag);
    }
    double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();

    Schedule schedule =
        uses_spt(tag) ? spt_schedule(assignment, problem)
                      : random_order_schedule(assignment, problem,
                                              derived_seed(seed, i));
    RunReport report = evaluate(assignment, schedule, problem, scenario);

    AlgorithmRun run;
    run.algorithm = tag;
    run.metrics["makespan"] = report.makespan;
    run.metrics["waiting"] = report.average_waiting;
    run.metrics["jain"] = report.jain;
    run.metrics["runtime"] = runtime;
    if (expected_makespan >= 0.0)
      run.metrics["expected_makespan"] = expected_makespan;
    out.push_back(std::move(run));
  }

  // lower-bound curve from the relaxed LP on the unrestricted problem
  FractionalSolution rlp = solve_rlp(problem);
  if (rlp.status != LpStatus::optimal)
    throw std::runtime_error("bound RLP did not solve");
  AlgorithmRun bound;
  bound.algorithm = kBoundTag;
  bound.metrics["makespan"] = rlp.objective;
  out.push_back(std::move(bound));
  return out;
}

double student_t_975(int degrees_of_freedom) {
  static const double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (degrees_of_freedom < 1) throw std::invalid_argument("df must be >= 1");
  if (degrees_of_freedom <= 30) return table[degrees_of_freedom - 1];
  return 1.960;  // normal approximation beyond the table
}

MetricStats aggregate(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("no samples to aggregate");
  MetricStats stats;
  double sum = std::accumulate(samples.begin(), samples.end(), 0.0);
  stats.mean = sum / static_cast<double>(samples.size());
  if (samples.size() == 1) {
    stats.ci_low = stats.ci_high = stats.mean;
    return stats;
  }
  double ss = 0.0;
  for (double v : samples) ss += (v - stats.mean) * (v - stats.mean);
  double stderr_mean = std::sqrt(ss / static_cast<double>(samples.size() - 1)) /
                       std::sqrt(static_cast<double>(samples.size()));
  double half = student_t_975(static_cast<int>(samples.size()) - 1) * stderr_mean;
  stats.ci_low = stats.mean - half;
  stats.ci_high = stats.mean + half;
  return stats;
}

SweepResult run_experiment(const ExperimentPlan& plan) {
  if (plan.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (plan.user_counts.empty()) throw std::invalid_argument("empty sweep");
  if (plan.access_modes.empty()) throw std::invalid_argument("no access modes");
  for (const auto& tag : plan.algorithms) {
    if (std::find(algorithm_tags().begin(), algorithm_tags().end(), tag) ==
        algorithm_tags().end())
      throw std::invalid_argument("unknown algorithm: " + tag);
  }

  SweepResult result;
  for (AccessMode access : plan.access_modes) {
    for (int num_users : plan.user_counts) {
      // samples[algorithm][metric] -> per-run values
      std::map<std::string, std::map<std::string, std::vector<double>>> samples;
      for (int r = 0; r < plan.runs; ++r) {
        uint64_t seed = plan.base_seed + static_cast<uint64_t>(r);
        std::vector<AlgorithmRun> runs;
        try {
          runs = run_single(plan, access, num_users, seed);
        } catch (const std::exception& e) {
          throw std::runtime_error(
              "run failed (access=" + to_string(access) +
              ", N=" + std::to_string(num_users) +
              ", seed=" + std::to_string(seed) + "): " + e.what());
        }
        for (const auto& run : runs) {
          for (const auto& [metric, value] : run.metrics)
            samples[run.algorithm][metric].push_back(value);
        }
      }

      std::vector<std::string> tags = plan.algorithms;
      tags.push_back(kBoundTag);
      for (const auto& tag : tags) {
        for (const auto& metric : metric_order()) {
          auto algo_it = samples.find(tag);
          if (algo_it == samples.end()) continue;
          auto metric_it = algo_it->second.find(metric);
          if (metric_it == algo_it->second.end()) continue;
          SweepRow row;
          row.access = access;
          row.num_users = num_users;
          row.algorithm = tag;
          row.metric = metric;
          row.stats = aggregate(metric_it->second);
          result.rows.push_back(std::move(row));
        }
      }
    }
  }
  return result;
}

const SweepRow* SweepResult::find(AccessMode access, int num_users,
                                  const std::string& algorithm,
                                  const std::string& metric) const {
  for (const auto& row : rows) {
    if (row.access == access && row.num_users == num_users &&
        row.algorithm == algorithm && row.metric == metric)
      return &row;
  }
  return nullptr;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  out << "num_users,algorithm,access,metric,mean,ci_low,ci_high\n";
  for (const auto& row : result.rows) {
    out << row.num_users << ',' << row.algorithm << ',' << to_string(row.access)
        << ',' << row.metric << ',' << format_double(row.stats.mean) << ','
        << format_double(row.stats.ci_low) << ','
        << format_double(row.stats.ci_high) << '\n';
  }
}

std::string sweep_to_json(const SweepResult& result) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"num_users", row.num_users},
                    {"algorithm", row.algorithm},
                    {"access", to_string(row.access)},
                    {"metric", row.metric},
                    {"mean", row.stats.mean},
                    {"ci_low", row.stats.ci_low},
                    {"ci_high", row.stats.ci_high}});
  }
  return ordered_json{{"rows", rows}}.dump(2) + "\n";
}

SweepResult sweep_from_json(const std::string& text) {
  ordered_json doc = ordered_json::parse(text);
  SweepResult result;
  for (const auto& item : doc.at("rows")) {
    SweepRow row;
    row.num_users = item.at("num_users").get<int>();
    row.algorithm = item.at("algorithm").get<std::string>();
    row.access = access_mode_from_string(item.at("access").get<std::string>());
    row.metric = item.at("metric").get<std::string>();
    row.stats.mean = item.at("mean").get<double>();
    row.stats.ci_low = item.at("ci_low").get<double>();
    row.stats.ci_high = item.at("ci_high").get<double>();
    result.rows.push_back(std::move(row));
  }
  return result;
}

namespace {

ordered_json plan_json(const ExperimentPlan& plan) {
  const ScenarioConfig& sc = plan.scenario;
  ordered_json access_modes = ordered_json::array();
  for (AccessMode mode : plan.access_modes) access_modes.push_back(to_string(mode));
  ordered_json j{
      {"area_width_m", sc.area_width_m},
      {"area_height_m", sc.area_height_m},
      {"num_bs", sc.num_bs},
      {"whitelist_prob", sc.whitelist_prob},
      {"bandwidth_hz", sc.bandwidth_hz},
      {"mbs_power_dbm", sc.mbs_power_dbm},
      {"fbs_power_dbm", sc.fbs_power_dbm},
      {"mbs_pathloss",
       {{"offset_db", sc.mbs_pathloss.offset_db}, {"slope_db", sc.mbs_pathloss.slope_db}}},
      {"fbs_pathloss",
       {{"offset_db", sc.fbs_pathloss.offset_db}, {"slope_db", sc.fbs_pathloss.slope_db}}},
      {"shadow_sigma_db", sc.shadow_sigma_db},
      {"packet_bits", sc.packet_bits},
      {"noise_figure_db", sc.noise_figure_db},
      {"access", access_modes},
      {"user_counts", plan.user_counts},
      {"runs", plan.runs},
      {"base_seed", plan.base_seed},
      {"algorithms", plan.algorithms},
      {"rounding_rho", plan.rounding_rho},
  };
  if (sc.noise_power_dbm)
    j["noise_power_dbm"] = *sc.noise_power_dbm;
  else
    j["noise_power_dbm"] = nullptr;
  if (plan.randomized_lambda > 0.0)
    j["randomized_lambda"] = plan.randomized_lambda;
  else
    j["randomized_lambda"] = "auto";
  return j;
}

}  // namespace

std::string plan_to_json(const ExperimentPlan& plan) {
  return plan_json(plan).dump(2) + "\n";
}

ExperimentPlan default_plan() { return ExperimentPlan{}; }

ExperimentPlan plan_from_json(const std::string& text) {
  ordered_json doc = ordered_json::parse(text);
  ExperimentPlan plan;
  ScenarioConfig& sc = plan.scenario;

  for (const auto& [key, value] : doc.items()) {
    if (key == "area_width_m") sc.area_width_m = value.get<double>();
    else if (key == "area_height_m") sc.area_height_m = value.get<double>();
    else if (key == "num_bs") sc.num_bs = value.get<int>();
    else if (key == "whitelist_prob") sc.whitelist_prob = value.get<double>();
    else if (key == "bandwidth_hz") sc.bandwidth_hz = value.get<double>();
    else if (key == "mbs_power_dbm") sc.mbs_power_dbm = value.get<double>();
    else if (key == "fbs_power_dbm") sc.fbs_power_dbm = value.get<double>();
    else if (key == "mbs_pathloss") {
      sc.mbs_pathloss.offset_db = value.at("offset_db").get<double>();
      sc.mbs_pathloss.slope_db = value.at("slope_db").get<double>();
    } else if (key == "fbs_pathloss") {
      sc.fbs_pathloss.offset_db = value.at("offset_db").get<double>();
      sc.fbs_pathloss.slope_db = value.at("slope_db").get<double>();
    } else if (key == "shadow_sigma_db") sc.shadow_sigma_db = value.get<double>();
    else if (key == "packet_bits") sc.packet_bits = value.get<double>();
    else if (key == "noise_figure_db") sc.noise_figure_db = value.get<double>();
    else if (key == "noise_power_dbm") {
      if (!value.is_null()) sc.noise_power_dbm = value.get<double>();
    } else if (key == "access") {
      plan.access_modes.clear();
      if (value.is_string()) {
        std::string s = value.get<std::string>();
        if (s == "both") {
          plan.access_modes = {AccessMode::open, AccessMode::closed};
        } else {
          plan.access_modes = {access_mode_from_string(s)};
        }
      } else {
        for (const auto& mode : value)
          plan.access_modes.push_back(
              access_mode_from_string(mode.get<std::string>()));
      }
    } else if (key == "user_counts") {
      plan.user_counts = value.get<std::vector<int>>();
    } else if (key == "runs") plan.runs = value.get<int>();
    else if (key == "base_seed") plan.base_seed = value.get<uint64_t>();
    else if (key == "algorithms") {
      plan.algorithms = value.get<std::vector<std::string>>();
    } else if (key == "rounding_rho") plan.rounding_rho = value.get<double>();
    else if (key == "randomized_lambda") {
      if (value.is_string()) {
        if (value.get<std::string>() != "auto")
          throw std::invalid_argument("randomized_lambda: number or \"auto\"");
        plan.randomized_lambda = 0.0;
      } else {
        plan.randomized_lambda = value.get<double>();
      }
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  return plan;
}

ExperimentPlan plan_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return plan_from_json(buffer.str());
}

std::vector<std::string> write_outputs(const SweepResult& result,
                                       const ExperimentPlan& plan,
                                       const std::string& out_dir,
                                       OutputFormat format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + out_dir + ": " +
                             ec.message());

  std::vector<std::string> written;
  auto write_file = [&](const std::string& name, const std::string& content) {
    fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    written.push_back(path.string());
  };

  if (format == OutputFormat::csv) {
    std::ostringstream csv;
    write_csv(result, csv);
    write_file("results.csv", csv.str());
  } else {
    write_file("results.json", sweep_to_json(result));
  }

  ordered_json manifest{{"version", kVersion}, {"config", plan_json(plan)}};
  ordered_json seeds = ordered_json::array();
  for (int r = 0; r < plan.runs; ++r)
    seeds.push_back(plan.base_seed + static_cast<uint64_t>(r));
  manifest["seeds"] = seeds;
  write_file("manifest.json", manifest.dump(2) + "\n");
  return written;
}

// ---------------------------------------------------------------------------
// oracle-check campaign

namespace {

struct CheckCounter {
  int failures = 0;
  std::ostream& log;

  explicit CheckCounter(std::ostream& out) : log(out) {}

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      log << "FAIL: " << what << "\n";
    }
  }
};

ServiceTimeProblem random_problem(Rng& rng, int max_users) {
  int m_count = rng.uniform_int(2, 3);
  int n_count = rng.uniform_int(4, max_users);
  bool open = rng.bernoulli(0.5);
  std::vector<std::vector<double>> t(m_count,
                                     std::vector<double>(n_count, kForbidden));
  for (int n = 0; n < n_count; ++n) {
    for (int m = 0; m < m_count; ++m) {
      bool keep = open || m == 0 || rng.bernoulli(0.6);
      if (keep) {
        // log-uniform over [0.1, 10] ms
        t[m][n] = std::exp(rng.uniform(std::log(1e-4), std::log(1e-2)));
      }
    }
  }
  return make_problem(std::move(t));
}

double assigned_ratio(const ServiceTimeProblem& problem, const Assignment& a) {
  double rho = 1.0;
  for (int n = 0; n < problem.num_users(); ++n)
    rho = std::max(rho, problem.t[a.bs_of[n]][n] / problem.t_min[n]);
  return rho;
}

}  // namespace

int run_oracle_check(const OracleCheckOptions& options, std::ostream& log) {
  CheckCounter check(log);
  Rng rng(options.seed);
  const double tol = 1e-9;
  const double rho = 5.0;

  for (int trial = 0; trial < options.trials; ++trial) {
    ServiceTimeProblem problem = random_problem(rng, options.max_users);
    Assignment best = brute_force_optimal(problem);
    auto [bound_mean, bound_max] = lower_bounds(problem);
    FractionalSolution rlp = solve_rlp(problem);
    std::string ctx = " (trial " + std::to_string(trial) + ")";

    check.expect(rlp.status == LpStatus::optimal, "RLP solved" + ctx);
    check.expect(bound_mean <= best.makespan + tol, "mean bound <= T*" + ctx);
    check.expect(bound_max <= best.makespan + tol, "max bound <= T*" + ctx);
    check.expect(rlp.objective <= best.makespan + tol, "RLP T <= T*" + ctx);
    check.expect(rlp.objective >= bound_mean - tol, "RLP T >= mean bound" + ctx);

    Assignment g = greedy(problem);
    check.expect(g.makespan >= best.makespan - tol, "greedy >= T*" + ctx);
    check.expect(g.makespan <=
                     2.0 * assigned_ratio(problem, g) * best.makespan + tol,
                 "greedy within 2*rho*T*" + ctx);

    Assignment r = rounding_approximation(problem, rho);
    check.expect(r.makespan >= best.makespan - tol, "rounding >= T*" + ctx);
    check.expect(r.makespan <= (rho + 1.0) * best.makespan + tol,
                 "rounding within (rho+1)*T*" + ctx);

    Assignment sf = sequential_fixing(problem);
    check.expect(sf.makespan >= best.makespan - tol, "seq fixing >= T*" + ctx);
    Assignment s = selfish(problem);
    check.expect(s.makespan >= best.makespan - tol, "selfish >= T*" + ctx);

    // randomized scheme invariants
    double lambda = 5.0 * problem.t_min[problem.num_users() / 2];
    ExpectedLoadState state = randomized_reduce(problem, lambda);
    for (int n = 0; n < problem.num_users(); ++n) {
      double total_p = 0.0;
      for (int m = 0; m < problem.num_bs(); ++m)
        total_p += state.probability[m][n];
      check.expect(std::abs(total_p - 1.0) <= tol, "sum p = 1" + ctx);
      for (int m : state.candidate_bs[n]) {
        check.expect(std::abs(state.probability[m][n] * problem.t[m][n] -
                              state.equalized_time[n]) <= tol,
                     "p*t equalized" + ctx);
      }
    }
    for (size_t i = 1; i < state.max_load_trace.size(); ++i) {
      check.expect(state.max_load_trace[i] <= state.max_load_trace[i - 1] + tol,
                   "expected max load non-increasing" + ctx);
    }
    int max_a = 0, min_b = problem.num_bs();
    double max_t = 0.0;
    for (int m = 0; m < problem.num_bs(); ++m)
      max_a = std::max(max_a, static_cast<int>(state.candidate_users[m].size()));
    for (int n = 0; n < problem.num_users(); ++n) {
      min_b = std::min(min_b, static_cast<int>(state.candidate_bs[n].size()));
      for (int m : state.candidate_bs[n])
        max_t = std::max(max_t, problem.t[m][n]);
    }
    check.expect(state.max_expected_load() <=
                     static_cast<double>(max_a) / min_b * max_t + tol,
                 "expected load bound" + ctx);

    Assignment sampled =
        randomized_assign(state, problem, options.seed + trial);
    check.expect(sampled.makespan >= best.makespan - tol,
                 "randomized >= T*" + ctx);
  }
  log << "instance campaign: " << options.trials << " trials\n";

  // SPT optimality against exhaustive permutations
  int spt_trials = std::max(options.trials, 100);
  for (int trial = 0; trial < spt_trials; ++trial) {
    int k = rng.uniform_int(1, 7);
    std::vector<double> times(k);
    for (double& t : times) t = rng.uniform(0.1, 10.0);
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> sorted = times;
    std::sort(sorted.begin(), sorted.end());
    double spt_value = waiting_time(order, sorted);

    std::vector<int> perm = order;
    double best_value = kForbidden;
    std::sort(perm.begin(), perm.end());
    do {
      std::vector<double> arranged(k);
      for (int i = 0; i < k; ++i) arranged[i] = times[perm[i]];
      best_value = std::min(best_value, waiting_time(perm, arranged));
    } while (std::next_permutation(perm.begin(), perm.end()));

    check.expect(spt_value <= best_value,
                 "SPT equals permutation minimum (trial " +
                     std::to_string(trial) + ")");
  }
  log << "SPT campaign: " << spt_trials << " trials\n";

  if (check.failures == 0)
    log << "all oracle checks passed\n";
  else
    log << check.failures << " oracle checks FAILED\n";
  return check.failures;
}

}  // namespace femtosim
