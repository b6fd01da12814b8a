#include "femtosim/association.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "femtosim/rng.hpp"

namespace femtosim {

Assignment make_assignment(const ServiceTimeProblem& problem,
                           std::vector<int> bs_of, std::string algorithm) {
  const int m_count = problem.num_bs();
  const int n_count = problem.num_users();
  if (static_cast<int>(bs_of.size()) != n_count)
    throw std::invalid_argument("assignment size mismatch");

  Assignment a;
  a.bs_of = std::move(bs_of);
  a.algorithm = std::move(algorithm);
  a.loads.assign(m_count, 0.0);
  for (int n = 0; n < n_count; ++n) {
    int m = a.bs_of[n];
    if (m < 0 || m >= m_count || !problem.allowed(m, n))
      throw std::invalid_argument("user " + std::to_string(n) +
                                  " assigned outside its candidate set");
    a.loads[m] += problem.t[m][n];
  }
  a.makespan = *std::max_element(a.loads.begin(), a.loads.end());
  return a;
}

namespace {

// Rebuilds a problem from the original keeping only pairs accepted by
// `keep`; every user must retain at least one candidate.
ServiceTimeProblem filter_problem(const ServiceTimeProblem& problem,
                                  const std::function<bool(int, int)>& keep) {
  std::vector<std::vector<double>> t(
      problem.num_bs(), std::vector<double>(problem.num_users(), kForbidden));
  for (int n = 0; n < problem.num_users(); ++n) {
    for (int m : problem.candidate_bs[n]) {
      if (keep(m, n)) t[m][n] = problem.t[m][n];
    }
  }
  return make_problem(std::move(t));
}

}  // namespace

ServiceTimeProblem restrict_by_ratio(const ServiceTimeProblem& problem, double rho) {
  if (rho < 1.0) throw std::invalid_argument("ratio threshold must be >= 1");
  return filter_problem(problem, [&](int m, int n) {
    return problem.t[m][n] / problem.t_min[n] <= rho;
  });
}

ServiceTimeProblem restrict_by_ratio_keep_mbs(const ServiceTimeProblem& problem,
                                              double gamma) {
  if (gamma < 1.0) throw std::invalid_argument("ratio threshold must be >= 1");
  return filter_problem(problem, [&](int m, int n) {
    return m == 0 || problem.t[m][n] / problem.t_min[n] <= gamma;
  });
}

ServiceTimeProblem restrict_by_time(const ServiceTimeProblem& problem,
                                    double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("time threshold must be positive");
  return filter_problem(problem, [&](int m, int n) {
    return m == 0 || problem.t[m][n] <= lambda;
  });
}

Assignment sequential_fixing(const ServiceTimeProblem& problem) {
  const int n_count = problem.num_users();
  Fixings fixings;
  std::vector<int> bs_of(n_count, -1);
  int unresolved = n_count;

  while (unresolved > 0) {
    FractionalSolution sol = solve_rlp(problem, fixings);
    if (sol.status == LpStatus::infeasible)
      throw std::runtime_error("sequential fixing: RLP became infeasible");

    // variable closest to an integer among the still-free pairs,
    // ties to the lowest (bs, user) index
    int best_m = -1, best_n = -1;
    double best_dist = 2.0;
    for (int m = 0; m < problem.num_bs(); ++m) {
      for (int n : problem.candidate_users[m]) {
        if (bs_of[n] >= 0) continue;
        if (fixings.to_zero.count({m, n})) continue;
        double v = sol.x[m][n];
        double dist = std::min(v, 1.0 - v);
        if (dist < best_dist - 1e-15) {
          best_dist = dist;
          best_m = m;
          best_n = n;
        }
      }
    }
    if (best_m < 0)
      throw std::runtime_error("sequential fixing: no free variable left");

    double v = sol.x[best_m][best_n];
    if (v >= 0.5) {  // exactly 0.5 rounds up
      fixings.to_one.insert({best_m, best_n});
      for (int m : problem.candidate_bs[best_n]) {
        if (m != best_m) fixings.to_zero.insert({m, best_n});
      }
      bs_of[best_n] = best_m;
      --unresolved;
    } else {
      fixings.to_zero.insert({best_m, best_n});
      // a user whose last candidate this was would make the RLP infeasible;
      // cannot happen because the RLP put weight somewhere else
    }
  }
  return make_assignment(problem, std::move(bs_of), "sequential_fixing");
}

RoundingGraph build_rounding_graph(const ServiceTimeProblem& problem,
                                   const FractionalSolution& solution) {
  const int m_count = problem.num_bs();
  const int n_count = problem.num_users();
  RoundingGraph graph;
  graph.num_users = n_count;
  graph.user_slots.assign(n_count, {});
  graph.user_weights.assign(n_count, {});

  // snap a cumulative weight to the nearest integer when it is within the
  // integrality tolerance, so group boundaries are not decided by noise
  auto snap = [](double v) {
    double r = std::round(v);
    return std::abs(v - r) <= kIntegralityTol ? r : v;
  };

  for (int m = 0; m < m_count; ++m) {
    // fractionally-assigned users of BS m, non-increasing service time
    // weights at or below twice the snap tolerance are dropped: they cannot
    // straddle a boundary cleanly and the user keeps ~1 weight elsewhere
    std::vector<int> users;
    double total = 0.0;
    for (int n : problem.candidate_users[m]) {
      if (solution.x[m][n] > 2.0 * kIntegralityTol) {
        users.push_back(n);
        total += solution.x[m][n];
      }
    }
    if (users.empty()) continue;
    std::stable_sort(users.begin(), users.end(), [&](int a, int b) {
      return problem.t[m][a] > problem.t[m][b];
    });

    int num_slots = static_cast<int>(std::ceil(snap(total)));
    int first_slot = static_cast<int>(graph.slots.size());
    for (int k = 1; k <= num_slots; ++k) graph.slots.push_back({m, k});

    double cumulative = 0.0;
    for (int n : users) {
      double x = solution.x[m][n];
      double lo = snap(cumulative);          // X_{m,u_{j-1}}
      double hi = snap(cumulative + x);      // X_{m,u_j}
      cumulative += x;
      // group k (1-based) covers cumulative weight (k-1, k]
      int k_lo = static_cast<int>(std::floor(lo)) + 1;  // group containing lo+
      int k_hi = static_cast<int>(std::ceil(hi));       // group containing hi
      k_hi = std::min(std::max(k_hi, 1), num_slots);
      k_lo = std::min(k_lo, k_hi);  // degenerate slivers collapse upward
      for (int k = k_lo; k <= k_hi; ++k) {
        double weight;
        if (k_lo == k_hi) {
          weight = x;
        } else if (k == k_hi) {
          weight = hi - (k - 1);  // X_{m,u_j} - k + 1
        } else if (k == k_lo) {
          weight = k - lo;
        } else {
          weight = 1.0;  // user spans a whole interior group
        }
        graph.user_slots[n].push_back(first_slot + k - 1);
        graph.user_weights[n].push_back(weight);
      }
    }
  }
  return graph;
}

namespace {

// Kuhn's augmenting-path matching, users in index order. O(V*E) like the
// textbook bound; graph sizes here are tiny.
struct Matcher {
  const RoundingGraph& graph;
  std::vector<int> slot_user;  // slot -> user or -1
  std::vector<int> user_slot;  // user -> slot or -1
  std::vector<bool> visited;

  explicit Matcher(const RoundingGraph& g)
      : graph(g),
        slot_user(g.slots.size(), -1),
        user_slot(g.num_users, -1),
        visited(g.slots.size(), false) {}

  bool augment(int user) {
    for (int slot : graph.user_slots[user]) {
      if (visited[slot]) continue;
      visited[slot] = true;
      if (slot_user[slot] < 0 || augment(slot_user[slot])) {
        slot_user[slot] = user;
        user_slot[user] = slot;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

std::vector<int> max_bipartite_matching(const RoundingGraph& graph) {
  Matcher matcher(graph);
  for (int n = 0; n < graph.num_users; ++n) {
    if (graph.user_slots[n].empty()) continue;
    std::fill(matcher.visited.begin(), matcher.visited.end(), false);
    matcher.augment(n);
  }
  return matcher.user_slot;
}

Assignment rounding_approximation(const ServiceTimeProblem& problem, double rho) {
  ServiceTimeProblem restricted = restrict_by_ratio(problem, rho);
  FractionalSolution sol = solve_rlp(restricted);
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error("rounding: RLP infeasible");

  RoundingGraph graph = build_rounding_graph(restricted, sol);
  std::vector<int> matched = max_bipartite_matching(graph);

  std::vector<int> bs_of(problem.num_users(), -1);
  for (int n = 0; n < problem.num_users(); ++n) {
    if (matched[n] < 0)
      throw std::runtime_error(
          "rounding: user left unmatched; the slot construction guarantees a "
          "perfect matching, so this indicates a bug");
    bs_of[n] = graph.slots[matched[n]].bs;
  }
  return make_assignment(problem, std::move(bs_of), "rounding");
}

Assignment greedy(const ServiceTimeProblem& problem) {
  const int m_count = problem.num_bs();
  const int n_count = problem.num_users();
  std::vector<double> load(m_count, 0.0);
  std::vector<bool> remaining(n_count, true);
  std::vector<int> bs_of(n_count, -1);

  for (int step = 0; step < n_count; ++step) {
    // least-loaded BS among those some remaining user can still join
    int best_bs = -1;
    for (int m = 0; m < m_count; ++m) {
      bool wanted = std::any_of(problem.candidate_users[m].begin(),
                                problem.candidate_users[m].end(),
                                [&](int n) { return remaining[n]; });
      if (!wanted) continue;
      if (best_bs < 0 || load[m] < load[best_bs]) best_bs = m;
    }
    if (best_bs < 0)
      throw std::runtime_error("greedy: users remain but no BS wants them");

    // fastest remaining user at that BS
    int best_user = -1;
    for (int n : problem.candidate_users[best_bs]) {
      if (!remaining[n]) continue;
      if (best_user < 0 || problem.t[best_bs][n] < problem.t[best_bs][best_user])
        best_user = n;
    }
    bs_of[best_user] = best_bs;
    load[best_bs] += problem.t[best_bs][best_user];
    remaining[best_user] = false;
  }
  return make_assignment(problem, std::move(bs_of), "greedy");
}

double ExpectedLoadState::max_expected_load() const {
  return *std::max_element(expected_load.begin(), expected_load.end());
}

ExpectedLoadState randomized_reduce(const ServiceTimeProblem& problem,
                                    double lambda) {
  ServiceTimeProblem reduced = restrict_by_time(problem, lambda);
  const int m_count = reduced.num_bs();
  const int n_count = reduced.num_users();

  ExpectedLoadState state;
  state.candidate_bs = reduced.candidate_bs;
  state.candidate_users = reduced.candidate_users;

  // H_n = 1 / sum_{m in B_n} 1/t_{m,n}; expected load is the sum of H over
  // a BS's users
  std::vector<double> inv_sum(n_count, 0.0);
  for (int n = 0; n < n_count; ++n) {
    for (int m : state.candidate_bs[n]) inv_sum[n] += 1.0 / reduced.t[m][n];
  }
  state.equalized_time.assign(n_count, 0.0);
  for (int n = 0; n < n_count; ++n) state.equalized_time[n] = 1.0 / inv_sum[n];
  state.expected_load.assign(m_count, 0.0);
  for (int m = 0; m < m_count; ++m) {
    for (int n : state.candidate_users[m])
      state.expected_load[m] += state.equalized_time[n];
  }
  state.max_load_trace.push_back(state.max_expected_load());

  std::vector<bool> multi(n_count, false);
  int multi_count = 0;
  for (int n = 0; n < n_count; ++n) {
    multi[n] = state.candidate_bs[n].size() > 1;
    if (multi[n]) ++multi_count;
  }

  while (multi_count > 0) {
    // most loaded BS, lowest index on ties
    int loaded_bs = 0;
    for (int m = 1; m < m_count; ++m) {
      if (state.expected_load[m] > state.expected_load[loaded_bs]) loaded_bs = m;
    }

    // hypothetical removal of (loaded_bs, n): H_n rises by delta for the
    // user's other BSs while loaded_bs sheds H_n
    int best_user = -1;
    double best_peak = 0.0;
    double best_delta = 0.0;
    for (int n : state.candidate_users[loaded_bs]) {
      if (!multi[n]) continue;
      double inv_t = 1.0 / reduced.t[loaded_bs][n];
      double delta = inv_t / ((inv_sum[n] - inv_t) * inv_sum[n]);
      double peak = 0.0;
      for (int m = 0; m < m_count; ++m) {
        double hypothetical = state.expected_load[m];
        if (m == loaded_bs) {
          hypothetical -= state.equalized_time[n];
        } else if (std::binary_search(state.candidate_bs[n].begin(),
                                      state.candidate_bs[n].end(), m)) {
          hypothetical += delta;
        }
        peak = std::max(peak, hypothetical);
      }
      if (best_user < 0 || peak < best_peak) {
        best_user = n;
        best_peak = peak;
        best_delta = delta;
      }
    }
    if (best_user < 0) break;  // the peak BS has no multi-candidate users left
    if (state.expected_load[loaded_bs] < best_peak) break;  // no improvement

    // accept: drop the pair and update H / expected loads incrementally
    auto& bs_list = state.candidate_bs[best_user];
    bs_list.erase(std::find(bs_list.begin(), bs_list.end(), loaded_bs));
    auto& user_list = state.candidate_users[loaded_bs];
    user_list.erase(std::find(user_list.begin(), user_list.end(), best_user));

    inv_sum[best_user] -= 1.0 / reduced.t[loaded_bs][best_user];
    state.expected_load[loaded_bs] -= state.equalized_time[best_user];
    state.equalized_time[best_user] += best_delta;
    for (int m : bs_list) state.expected_load[m] += best_delta;

    if (bs_list.size() == 1) {
      multi[best_user] = false;
      --multi_count;
    }
    state.max_load_trace.push_back(state.max_expected_load());
  }

  state.probability.assign(m_count, std::vector<double>(n_count, 0.0));
  for (int n = 0; n < n_count; ++n) {
    for (int m : state.candidate_bs[n])
      state.probability[m][n] = state.equalized_time[n] / reduced.t[m][n];
  }
  return state;
}

Assignment randomized_assign(const ExpectedLoadState& state,
                             const ServiceTimeProblem& problem, uint64_t seed) {
  Rng rng(seed);
  const int n_count = problem.num_users();
  std::vector<int> bs_of(n_count, -1);
  for (int n = 0; n < n_count; ++n) {
    const auto& candidates = state.candidate_bs[n];
    if (candidates.size() == 1) {
      bs_of[n] = candidates.front();
      continue;
    }
    double u = rng.uniform();
    double cumulative = 0.0;
    bs_of[n] = candidates.back();  // guards against cumulative rounding
    for (int m : candidates) {
      cumulative += state.probability[m][n];
      if (u < cumulative) {
        bs_of[n] = m;
        break;
      }
    }
  }
  return make_assignment(problem, std::move(bs_of), "randomized");
}

Assignment selfish(const ServiceTimeProblem& problem) {
  const int n_count = problem.num_users();
  std::vector<int> bs_of(n_count, -1);
  for (int n = 0; n < n_count; ++n) {
    for (int m : problem.candidate_bs[n]) {
      if (bs_of[n] < 0 || problem.t[m][n] < problem.t[bs_of[n]][n]) bs_of[n] = m;
    }
  }
  return make_assignment(problem, std::move(bs_of), "selfish");
}

Assignment brute_force_optimal(const ServiceTimeProblem& problem,
                               double max_combinations) {
  const int m_count = problem.num_bs();
  const int n_count = problem.num_users();
  double combos = 1.0;
  for (int n = 0; n < n_count; ++n) {
    combos *= static_cast<double>(problem.candidate_bs[n].size());
    if (combos > max_combinations)
      throw std::invalid_argument("instance too large for exhaustive search");
  }

  std::vector<int> choice(n_count, 0);  // index into candidate_bs[n]
  std::vector<double> load(m_count, 0.0);
  std::vector<int> best;
  double best_makespan = kForbidden;

  // depth-first product walk in lexicographic bs_of order; strict improvement
  // keeps the first (lexicographically smallest) optimum
  std::function<void(int)> walk = [&](int n) {
    if (n == n_count) {
      double makespan = *std::max_element(load.begin(), load.end());
      if (makespan < best_makespan) {
        best_makespan = makespan;
        best.assign(n_count, 0);
        for (int i = 0; i < n_count; ++i)
          best[i] = problem.candidate_bs[i][choice[i]];
      }
      return;
    }
    for (int c = 0; c < static_cast<int>(problem.candidate_bs[n].size()); ++c) {
      int m = problem.candidate_bs[n][c];
      choice[n] = c;
      load[m] += problem.t[m][n];
      walk(n + 1);
      load[m] -= problem.t[m][n];
    }
  };
  walk(0);
  return make_assignment(problem, std::move(best), "brute_force");
}

std::pair<double, double> lower_bounds(const ServiceTimeProblem& problem) {
  double sum = std::accumulate(problem.t_min.begin(), problem.t_min.end(), 0.0);
  double max = *std::max_element(problem.t_min.begin(), problem.t_min.end());
  return {sum / problem.num_bs(), max};
}

}  // namespace femtosim
