#pragma once

// Network model: scenario generation, the radio link budget, and the
// conversion of a scenario into the service-time matrix consumed by the
// association algorithms. Base stations and users are indexed from 0; index 0
// is always the macro base station (MBS), the rest are femtocells (FBS).

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace femtosim {

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

enum class BsKind { macro, femto };
enum class AccessMode { open, closed };

std::string to_string(AccessMode mode);
AccessMode access_mode_from_string(const std::string& s);

// PL(d) = offset_db + slope_db * log10(d), d in meters
struct PathLossModel {
  double offset_db = 0.0;
  double slope_db = 0.0;
};

struct BaseStation {
  int id = 0;  // == position in Scenario::base_stations; 0 is the MBS
  double x = 0.0, y = 0.0;
  double tx_power_dbm = 0.0;
  BsKind kind = BsKind::macro;
  PathLossModel pathloss;
  double shadow_sigma_db = 0.0;
};

struct User {
  int id = 0;
  double x = 0.0, y = 0.0;
  std::vector<int> allowed_bs;  // ascending; always contains 0 (the MBS)
};

struct Scenario {
  double bandwidth_hz = 0.0;
  double noise_power_dbm = 0.0;  // sigma^2 over the whole bandwidth
  double packet_bits = 0.0;
  std::vector<BaseStation> base_stations;
  std::vector<User> users;
  std::vector<std::vector<double>> gains;  // linear scale, [bs][user]
  uint64_t seed = 0;

  int num_bs() const { return static_cast<int>(base_stations.size()); }
  int num_users() const { return static_cast<int>(users.size()); }
};

// Defaults mirror the simulation parameters the algorithms were evaluated
// with: 6 BSs, 10 MHz, 43/31.5 dBm, the two log-distance path-loss models,
// 6 dB shadowing, 1 KByte packets.
struct ScenarioConfig {
  double area_width_m = 500.0;
  double area_height_m = 500.0;
  int num_bs = 6;
  int num_users = 30;
  AccessMode access = AccessMode::open;
  double whitelist_prob = 0.3;  // closed access: P(an FBS admits a user)
  double bandwidth_hz = 10e6;
  double mbs_power_dbm = 43.0;
  double fbs_power_dbm = 31.5;
  PathLossModel mbs_pathloss{28.0, 35.0};
  PathLossModel fbs_pathloss{38.5, 20.0};
  double shadow_sigma_db = 6.0;
  double packet_bits = 8192.0;  // 1 KByte = 1024 bytes
  double noise_figure_db = 9.0;
  // overrides thermal noise + noise figure when set
  std::optional<double> noise_power_dbm;
};

// The abstract optimization input: service times t[m][n] in seconds with
// kForbidden marking pairs the user may not connect to, plus both set views
// and the per-user minimum service time.
struct ServiceTimeProblem {
  std::vector<std::vector<double>> t;             // [bs][user]
  std::vector<std::vector<int>> candidate_bs;     // B_n, ascending
  std::vector<std::vector<int>> candidate_users;  // A_m, ascending
  std::vector<double> t_min;                      // min over B_n of t[m][n]

  int num_bs() const { return static_cast<int>(t.size()); }
  int num_users() const { return static_cast<int>(t_min.size()); }
  bool allowed(int bs, int user) const { return std::isfinite(t[bs][user]); }
};

// Builds a problem directly from a service-time matrix; candidate sets are
// derived from the finite entries. Every user needs at least one finite
// entry and finite entries must be positive.
ServiceTimeProblem make_problem(std::vector<std::vector<double>> service_times);

double dbm_to_mw(double dbm);
double path_loss_db(const PathLossModel& model, double distance_m);
// thermal noise floor (-174 dBm/Hz) over the bandwidth plus a noise figure
double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db);

Scenario generate_scenario(const ScenarioConfig& config, uint64_t seed);

// Total received power at user n from every BS except m (linear mW).
double interference(const Scenario& scenario, int bs, int user);

// Downlink Shannon capacity in bit/s of the (bs, user) link with all other
// BSs transmitting.
double capacity(const Scenario& scenario, int bs, int user);

ServiceTimeProblem build_problem(const Scenario& scenario);

}  // namespace femtosim
