#include "femtosim/lp.hpp"

#include <ostream>
#include <stdexcept>

namespace femtosim {

RlpInstance build_rlp(const ServiceTimeProblem& problem, const Fixings& fixings) {
  RlpInstance inst;
  inst.problem = &problem;
  inst.fixings = fixings;
  const int m_count = problem.num_bs();
  const int n_count = problem.num_users();
  inst.base_load.assign(m_count, 0.0);
  inst.user_resolved.assign(n_count, false);

  for (const auto& [m, n] : fixings.to_one) {
    if (!problem.allowed(m, n) || fixings.to_zero.count({m, n}) ||
        inst.user_resolved[n]) {
      inst.contradictory = true;  // forbidden pair or two BSs for one user
      return inst;
    }
    inst.user_resolved[n] = true;
    inst.base_load[m] += problem.t[m][n];
  }

  for (int m = 0; m < m_count; ++m) {
    for (int n : problem.candidate_users[m]) {
      if (inst.user_resolved[n]) continue;
      if (fixings.to_zero.count({m, n})) continue;
      inst.variables.push_back({m, n});
    }
  }

  // a user with every candidate fixed to zero has an unsatisfiable
  // assignment row
  std::vector<int> free_candidates(n_count, 0);
  for (const auto& [m, n] : inst.variables) {
    (void)m;
    ++free_candidates[n];
  }
  for (int n = 0; n < n_count; ++n) {
    if (!inst.user_resolved[n] && free_candidates[n] == 0) {
      inst.contradictory = true;
      return inst;
    }
  }
  return inst;
}

LinearProgram RlpInstance::to_linear_program() const {
  const ServiceTimeProblem& prob = *problem;
  const int m_count = prob.num_bs();
  const int n_count = prob.num_users();
  const int num_x = static_cast<int>(variables.size());
  const int t_col = num_x;  // T is the last variable

  LinearProgram lp;
  lp.num_vars = num_x + 1;
  lp.objective.assign(lp.num_vars, 0.0);
  lp.objective[t_col] = 1.0;

  // assignment rows: sum_m x_{m,n} = 1 for every unresolved user
  std::vector<int> row_of_user(n_count, -1);
  for (int n = 0; n < n_count; ++n) {
    if (user_resolved[n]) continue;
    row_of_user[n] = static_cast<int>(lp.constraints.size());
    LinearProgram::Constraint c;
    c.coeffs.assign(lp.num_vars, 0.0);
    c.relation = Relation::equal;
    c.rhs = 1.0;
    lp.constraints.push_back(std::move(c));
  }
  // load rows: sum_n t_{m,n} x_{m,n} - T <= -base_load_m
  std::vector<int> row_of_bs(m_count, -1);
  for (int m = 0; m < m_count; ++m) {
    row_of_bs[m] = static_cast<int>(lp.constraints.size());
    LinearProgram::Constraint c;
    c.coeffs.assign(lp.num_vars, 0.0);
    c.coeffs[t_col] = -1.0;
    c.relation = Relation::less_equal;
    c.rhs = -base_load[m];
    lp.constraints.push_back(std::move(c));
  }
  for (int v = 0; v < num_x; ++v) {
    auto [m, n] = variables[v];
    lp.constraints[row_of_user[n]].coeffs[v] = 1.0;
    lp.constraints[row_of_bs[m]].coeffs[v] = prob.t[m][n];
  }
  return lp;
}

FractionalSolution solve_rlp(const ServiceTimeProblem& problem,
                             const Fixings& fixings) {
  RlpInstance inst = build_rlp(problem, fixings);
  FractionalSolution sol;
  if (inst.contradictory) {
    sol.status = LpStatus::infeasible;
    return sol;
  }

  SimplexSolution simplex = solve_simplex(inst.to_linear_program());
  if (simplex.status == SimplexStatus::infeasible) {
    sol.status = LpStatus::infeasible;
    return sol;
  }
  if (simplex.status != SimplexStatus::optimal)
    throw std::runtime_error("RLP solve failed: simplex iteration guard exceeded");

  sol.status = LpStatus::optimal;
  sol.objective = simplex.objective;
  sol.x.assign(problem.num_bs(), std::vector<double>(problem.num_users(), 0.0));
  for (size_t v = 0; v < inst.variables.size(); ++v) {
    auto [m, n] = inst.variables[v];
    sol.x[m][n] = simplex.values[v];
  }
  for (const auto& [m, n] : fixings.to_one) sol.x[m][n] = 1.0;
  return sol;
}

int count_fractional(const FractionalSolution& solution) {
  int count = 0;
  for (const auto& row : solution.x) {
    for (double v : row) {
      if (v > kIntegralityTol && v < 1.0 - kIntegralityTol) ++count;
    }
  }
  return count;
}

void dump_lp(const ServiceTimeProblem& problem, const Fixings& fixings,
             std::ostream& out) {
  RlpInstance inst = build_rlp(problem, fixings);
  out << "\\ RLP: min T, assignment rows per user, load rows per BS\n";
  out << "Minimize\n obj: T\nSubject To\n";
  const int n_count = problem.num_users();
  const int m_count = problem.num_bs();
  for (int n = 0; n < n_count; ++n) {
    if (inst.user_resolved[n]) continue;
    out << " assign_u" << n << ":";
    for (const auto& [m, un] : inst.variables)
      if (un == n) out << " + x_" << m << "_" << n;
    out << " = 1\n";
  }
  for (int m = 0; m < m_count; ++m) {
    out << " load_b" << m << ":";
    for (const auto& [vm, n] : inst.variables)
      if (vm == m) out << " + " << problem.t[m][n] << " x_" << m << "_" << n;
    out << " - T <= " << -inst.base_load[m] << "\n";
  }
  out << "Bounds\n T >= 0\nEnd\n";
}

}  // namespace femtosim
