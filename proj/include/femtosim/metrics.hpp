#pragma once

// Evaluation quantities for a finished run: makespan, average waiting time,
// Jain fairness over per-user link capacities, and the analytic lower
// bounds.

#include <cstdint>
#include <string>
#include <vector>

#include "femtosim/association.hpp"
#include "femtosim/model.hpp"
#include "femtosim/scheduling.hpp"

namespace femtosim {

// (sum C)^2 / (N * sum C^2); ranges from 1/N (one user gets everything) to 1
// (all equal). Throws when every throughput is zero.
double jain_index(const std::vector<double>& throughputs);

struct RunReport {
  std::string algorithm;
  double makespan = 0.0;         // seconds
  double average_waiting = 0.0;  // seconds
  double jain = 0.0;
  double bound_mean = 0.0;       // sum of best times over M
  double bound_max = 0.0;        // largest best time
  double runtime_seconds = 0.0;  // filled by the caller that timed the run
  uint64_t seed = 0;
  std::string scenario;          // short descriptor, e.g. "M=6,N=30,open"
};

RunReport evaluate(const Assignment& assignment, const Schedule& schedule,
                   const ServiceTimeProblem& problem, const Scenario& scenario);

}  // namespace femtosim
