#include "femtosim/metrics.hpp"

#include <stdexcept>

namespace femtosim {

double jain_index(const std::vector<double>& throughputs) {
  if (throughputs.empty())
    throw std::invalid_argument("jain index of an empty list");
  double sum = 0.0, sum_sq = 0.0;
  for (double c : throughputs) {
    if (c < 0.0) throw std::invalid_argument("negative throughput");
    sum += c;
    sum_sq += c * c;
  }
  if (sum_sq == 0.0)
    throw std::invalid_argument("jain index undefined for all-zero throughputs");
  return sum * sum / (static_cast<double>(throughputs.size()) * sum_sq);
}

RunReport evaluate(const Assignment& assignment, const Schedule& schedule,
                   const ServiceTimeProblem& problem, const Scenario& scenario) {
  RunReport report;
  report.algorithm = assignment.algorithm;
  report.makespan = assignment.makespan;
  report.average_waiting = schedule.average_waiting;

  std::vector<double> throughputs(scenario.num_users(), 0.0);
  for (int n = 0; n < scenario.num_users(); ++n)
    throughputs[n] = capacity(scenario, assignment.bs_of[n], n);
  report.jain = jain_index(throughputs);

  auto [mean_bound, max_bound] = lower_bounds(problem);
  report.bound_mean = mean_bound;
  report.bound_max = max_bound;
  report.seed = scenario.seed;
  report.scenario = "M=" + std::to_string(scenario.num_bs()) +
                    ",N=" + std::to_string(scenario.num_users());
  return report;
}

}  // namespace femtosim
