#pragma once

// Per-BS service order and waiting times. "Waiting time" of a user is its
// completion time: the sum of the service times of everyone served before it
// plus its own. Shortest-processing-time-first order minimizes the average.

#include <cstdint>
#include <vector>

#include "femtosim/association.hpp"
#include "femtosim/model.hpp"

namespace femtosim {

struct Schedule {
  std::vector<std::vector<int>> order;     // per BS, users in service order
  std::vector<double> completion;          // per user, seconds
  std::vector<double> bs_average_waiting;  // per BS (0 when idle), seconds
  double average_waiting = 0.0;            // over all users, seconds
};

// Average of the running completion times; times[i] is the service time of
// the i-th served user.
double waiting_time(const std::vector<int>& order,
                    const std::vector<double>& times);

// Users at each BS served in increasing service time, ties to the lower id.
Schedule spt_schedule(const Assignment& assignment,
                      const ServiceTimeProblem& problem);

// Uniform random service order per BS; the baseline scheduler.
Schedule random_order_schedule(const Assignment& assignment,
                               const ServiceTimeProblem& problem, uint64_t seed);

}  // namespace femtosim
