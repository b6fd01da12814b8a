#pragma once

// The five cell-association algorithms (sequential fixing, LP rounding,
// greedy, randomized, selfish), the bipartite rounding machinery, the
// enumeration oracle and the analytic lower bounds.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "femtosim/lp.hpp"
#include "femtosim/model.hpp"

namespace femtosim {

struct Assignment {
  std::vector<int> bs_of;      // user -> BS
  std::vector<double> loads;   // per-BS total service time, seconds
  double makespan = 0.0;       // max over loads
  std::string algorithm;

  int num_users() const { return static_cast<int>(bs_of.size()); }
};

// Recomputes loads and makespan from the mapping; throws if any user is
// mapped outside its candidate set.
Assignment make_assignment(const ServiceTimeProblem& problem,
                           std::vector<int> bs_of, std::string algorithm);

// Candidate-set restrictions. The ratio forms keep BSs whose service time is
// within a factor of the user's best; the MBS (index 0) is forced to stay in
// the second form. The time form keeps BSs under an absolute bound plus the
// MBS. t_min is recomputed from the surviving sets.
ServiceTimeProblem restrict_by_ratio(const ServiceTimeProblem& problem, double rho);
ServiceTimeProblem restrict_by_ratio_keep_mbs(const ServiceTimeProblem& problem,
                                              double gamma);
ServiceTimeProblem restrict_by_time(const ServiceTimeProblem& problem,
                                    double lambda);

// Iteratively solves the RLP, rounds the variable closest to an integer and
// fixes it, until every user is pinned to one BS.
Assignment sequential_fixing(const ServiceTimeProblem& problem);

// Bipartite rounding graph built from an RLP solution: each BS m gets
// ceil(sum_n x_{m,n}) slot nodes, its fractionally-assigned users are sorted
// by non-increasing service time and cut into unit-weight groups, and a user
// straddling a group boundary is connected to both slots with its weight
// split.
struct RoundingGraph {
  struct Slot {
    int bs = 0;
    int index = 0;  // k within the BS, starting at 1
  };
  int num_users = 0;
  std::vector<Slot> slots;
  // per user: incident slot ids and the adjusted weights x'
  std::vector<std::vector<int>> user_slots;
  std::vector<std::vector<double>> user_weights;
};

RoundingGraph build_rounding_graph(const ServiceTimeProblem& problem,
                                   const FractionalSolution& solution);

// Maximum-cardinality matching (augmenting paths); returns slot id per user
// or -1 for unmatched users.
std::vector<int> max_bipartite_matching(const RoundingGraph& graph);

// Restricts candidates by ratio threshold rho, solves the RLP and rounds it
// through a maximum matching on the slot graph.
Assignment rounding_approximation(const ServiceTimeProblem& problem, double rho);

// Repeatedly gives the least-loaded wanted BS its fastest remaining user.
Assignment greedy(const ServiceTimeProblem& problem);

// State of the randomized scheme after candidate reduction: per-user
// equalized expected time H_n, per-BS expected load, and the connection
// probabilities p_{m,n} = H_n / t_{m,n}.
struct ExpectedLoadState {
  std::vector<std::vector<int>> candidate_bs;     // reduced B''_n
  std::vector<std::vector<int>> candidate_users;  // reduced A''_m
  std::vector<double> equalized_time;             // H_n, seconds
  std::vector<double> expected_load;              // per BS, seconds
  std::vector<std::vector<double>> probability;   // [bs][user]
  // max expected load after phase I and after each accepted removal
  std::vector<double> max_load_trace;

  double max_expected_load() const;
};

ExpectedLoadState randomized_reduce(const ServiceTimeProblem& problem,
                                    double lambda);

Assignment randomized_assign(const ExpectedLoadState& state,
                             const ServiceTimeProblem& problem, uint64_t seed);

// Every user picks its fastest candidate BS regardless of load.
Assignment selfish(const ServiceTimeProblem& problem);

// Exhaustive minimum-makespan search; ties resolve to the lexicographically
// smallest mapping. Throws if the candidate product exceeds max_combinations.
Assignment brute_force_optimal(const ServiceTimeProblem& problem,
                               double max_combinations = 1e7);

// (mean bound, max bound): sum of per-user best times over M, and the
// largest per-user best time. Both lower-bound the optimal makespan.
std::pair<double, double> lower_bounds(const ServiceTimeProblem& problem);

}  // namespace femtosim
