#include "femtosim/scheduling.hpp"

#include <algorithm>
#include <stdexcept>

#include "femtosim/rng.hpp"

namespace femtosim {

double waiting_time(const std::vector<int>& order,
                    const std::vector<double>& times) {
  if (order.size() != times.size())
    throw std::invalid_argument("order and service times differ in length");
  if (order.empty()) return 0.0;
  double elapsed = 0.0, total = 0.0;
  for (double t : times) {
    elapsed += t;
    total += elapsed;
  }
  return total / static_cast<double>(order.size());
}

namespace {

Schedule finish_schedule(std::vector<std::vector<int>> order,
                         const Assignment& assignment,
                         const ServiceTimeProblem& problem) {
  Schedule schedule;
  schedule.order = std::move(order);
  schedule.completion.assign(problem.num_users(), 0.0);
  schedule.bs_average_waiting.assign(problem.num_bs(), 0.0);

  double total = 0.0;
  for (int m = 0; m < problem.num_bs(); ++m) {
    double elapsed = 0.0, bs_total = 0.0;
    for (int n : schedule.order[m]) {
      elapsed += problem.t[m][n];
      schedule.completion[n] = elapsed;
      bs_total += elapsed;
    }
    if (!schedule.order[m].empty())
      schedule.bs_average_waiting[m] =
          bs_total / static_cast<double>(schedule.order[m].size());
    total += bs_total;
  }
  schedule.average_waiting = total / static_cast<double>(problem.num_users());
  (void)assignment;
  return schedule;
}

std::vector<std::vector<int>> users_per_bs(const Assignment& assignment,
                                           const ServiceTimeProblem& problem) {
  std::vector<std::vector<int>> groups(problem.num_bs());
  for (int n = 0; n < assignment.num_users(); ++n)
    groups[assignment.bs_of[n]].push_back(n);
  return groups;
}

}  // namespace

Schedule spt_schedule(const Assignment& assignment,
                      const ServiceTimeProblem& problem) {
  auto groups = users_per_bs(assignment, problem);
  for (int m = 0; m < problem.num_bs(); ++m) {
    std::stable_sort(groups[m].begin(), groups[m].end(), [&](int a, int b) {
      return problem.t[m][a] < problem.t[m][b];
    });
  }
  return finish_schedule(std::move(groups), assignment, problem);
}

Schedule random_order_schedule(const Assignment& assignment,
                               const ServiceTimeProblem& problem,
                               uint64_t seed) {
  Rng rng(seed);
  auto groups = users_per_bs(assignment, problem);
  for (auto& group : groups) {
    for (int i = static_cast<int>(group.size()) - 1; i > 0; --i)
      std::swap(group[i], group[rng.uniform_int(0, i)]);
  }
  return finish_schedule(std::move(groups), assignment, problem);
}

}  // namespace femtosim
