#include "femtosim/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "femtosim/rng.hpp"

namespace femtosim {

std::string to_string(AccessMode mode) {
  return mode == AccessMode::open ? "open" : "closed";
}

AccessMode access_mode_from_string(const std::string& s) {
  if (s == "open") return AccessMode::open;
  if (s == "closed") return AccessMode::closed;
  throw std::invalid_argument("unknown access mode: " + s);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double path_loss_db(const PathLossModel& model, double distance_m) {
  return model.offset_db + model.slope_db * std::log10(distance_m);
}

double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db) {
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

ServiceTimeProblem make_problem(std::vector<std::vector<double>> service_times) {
  ServiceTimeProblem problem;
  problem.t = std::move(service_times);
  const int m_count = static_cast<int>(problem.t.size());
  if (m_count == 0) throw std::invalid_argument("service-time matrix has no BS rows");
  const int n_count = static_cast<int>(problem.t[0].size());
  if (n_count == 0) throw std::invalid_argument("service-time matrix has no users");
  for (const auto& row : problem.t) {
    if (static_cast<int>(row.size()) != n_count)
      throw std::invalid_argument("service-time matrix is ragged");
  }

  problem.candidate_bs.assign(n_count, {});
  problem.candidate_users.assign(m_count, {});
  problem.t_min.assign(n_count, kForbidden);
  for (int m = 0; m < m_count; ++m) {
    for (int n = 0; n < n_count; ++n) {
      double value = problem.t[m][n];
      if (!std::isfinite(value)) continue;
      if (value <= 0.0)
        throw std::invalid_argument("service times must be positive");
      problem.candidate_bs[n].push_back(m);
      problem.candidate_users[m].push_back(n);
      problem.t_min[n] = std::min(problem.t_min[n], value);
    }
  }
  for (int n = 0; n < n_count; ++n) {
    if (problem.candidate_bs[n].empty())
      throw std::invalid_argument("user " + std::to_string(n) +
                                  " has no candidate BS");
  }
  return problem;
}

namespace {

void validate(const ScenarioConfig& config) {
  if (config.area_width_m <= 0.0 || config.area_height_m <= 0.0)
    throw std::invalid_argument("network area must be positive");
  if (config.num_bs < 1) throw std::invalid_argument("need at least one BS");
  if (config.num_users < 1) throw std::invalid_argument("need at least one user");
  if (config.bandwidth_hz <= 0.0)
    throw std::invalid_argument("bandwidth must be positive");
  if (config.noise_power_dbm && !std::isfinite(*config.noise_power_dbm))
    throw std::invalid_argument("noise power override must be finite");
}

double distance(double ax, double ay, double bx, double by) {
  // distances below 1 m are clamped before the path-loss log
  return std::max(1.0, std::hypot(ax - bx, ay - by));
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& config, uint64_t seed) {
  validate(config);
  Rng rng(seed);

  Scenario scenario;
  scenario.bandwidth_hz = config.bandwidth_hz;
  scenario.noise_power_dbm =
      config.noise_power_dbm
          ? *config.noise_power_dbm
          : thermal_noise_dbm(config.bandwidth_hz, config.noise_figure_db);
  scenario.packet_bits = config.packet_bits;
  scenario.seed = seed;

  // Draw order is part of the determinism contract: FBS positions, user
  // positions, closed-access whitelists, then shadowing row-major.
  scenario.base_stations.reserve(config.num_bs);
  BaseStation mbs;
  mbs.id = 0;
  mbs.x = config.area_width_m / 2.0;
  mbs.y = config.area_height_m / 2.0;
  mbs.tx_power_dbm = config.mbs_power_dbm;
  mbs.kind = BsKind::macro;
  mbs.pathloss = config.mbs_pathloss;
  mbs.shadow_sigma_db = config.shadow_sigma_db;
  scenario.base_stations.push_back(mbs);
  for (int m = 1; m < config.num_bs; ++m) {
    BaseStation fbs;
    fbs.id = m;
    fbs.x = rng.uniform(0.0, config.area_width_m);
    fbs.y = rng.uniform(0.0, config.area_height_m);
    fbs.tx_power_dbm = config.fbs_power_dbm;
    fbs.kind = BsKind::femto;
    fbs.pathloss = config.fbs_pathloss;
    fbs.shadow_sigma_db = config.shadow_sigma_db;
    scenario.base_stations.push_back(fbs);
  }

  scenario.users.reserve(config.num_users);
  for (int n = 0; n < config.num_users; ++n) {
    User user;
    user.id = n;
    user.x = rng.uniform(0.0, config.area_width_m);
    user.y = rng.uniform(0.0, config.area_height_m);
    scenario.users.push_back(user);
  }

  for (auto& user : scenario.users) {
    user.allowed_bs.push_back(0);  // the MBS serves everyone in coverage
    for (int m = 1; m < config.num_bs; ++m) {
      bool admitted = rng.bernoulli(config.whitelist_prob);
      if (config.access == AccessMode::open || admitted)
        user.allowed_bs.push_back(m);
    }
    if (config.access == AccessMode::open) {
      // bernoulli draws above keep the stream layout identical across modes
      user.allowed_bs.clear();
      for (int m = 0; m < config.num_bs; ++m) user.allowed_bs.push_back(m);
    }
  }

  scenario.gains.assign(config.num_bs,
                        std::vector<double>(config.num_users, 0.0));
  for (int m = 0; m < config.num_bs; ++m) {
    const BaseStation& bs = scenario.base_stations[m];
    for (int n = 0; n < config.num_users; ++n) {
      const User& user = scenario.users[n];
      double d = distance(bs.x, bs.y, user.x, user.y);
      double shadow_db = rng.gaussian(0.0, bs.shadow_sigma_db);
      double loss_db = path_loss_db(bs.pathloss, d) + shadow_db;
      scenario.gains[m][n] = std::pow(10.0, -loss_db / 10.0);
    }
  }
  return scenario;
}

namespace {

double received_mw(const Scenario& scenario, int bs, int user) {
  return scenario.gains[bs][user] *
         dbm_to_mw(scenario.base_stations[bs].tx_power_dbm);
}

double total_received_mw(const Scenario& scenario, int user) {
  double total = 0.0;
  for (int i = 0; i < scenario.num_bs(); ++i)
    total += received_mw(scenario, i, user);
  return total;
}

}  // namespace

double interference(const Scenario& scenario, int bs, int user) {
  return total_received_mw(scenario, user) - received_mw(scenario, bs, user);
}

double capacity(const Scenario& scenario, int bs, int user) {
  double noise_mw = dbm_to_mw(scenario.noise_power_dbm);
  double serving_mw = received_mw(scenario, bs, user);
  double total_mw = total_received_mw(scenario, user);
  if (noise_mw + total_mw <= 0.0)
    throw std::runtime_error("degenerate scenario: zero noise plus received power");

  // eta = serving / (noise + total) < 1 strictly, so C = B*log2(1/(1-eta))
  // is finite. 1 - eta is evaluated as (noise + (total - serving)) /
  // (noise + total) and the log via log1p; the naive forms lose most digits
  // when eta approaches 0 or 1.
  double rest_mw = noise_mw + (total_mw - serving_mw);
  return scenario.bandwidth_hz * std::log1p(serving_mw / rest_mw) / M_LN2;
}

ServiceTimeProblem build_problem(const Scenario& scenario) {
  const int m_count = scenario.num_bs();
  const int n_count = scenario.num_users();
  std::vector<std::vector<double>> t(m_count,
                                     std::vector<double>(n_count, kForbidden));
  for (int n = 0; n < n_count; ++n) {
    for (int m : scenario.users[n].allowed_bs)
      t[m][n] = scenario.packet_bits / capacity(scenario, m, n);
  }
  return make_problem(std::move(t));
}

}  // namespace femtosim
