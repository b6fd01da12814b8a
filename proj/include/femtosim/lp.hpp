#pragma once

// Relaxed LP (RLP) of the cell-association problem: minimize the makespan
// bound T subject to one assignment equality per user and one load
// constraint per BS, with x in [0,1]. Sequential fixing drives this solver
// repeatedly with growing sets of fixed variables.

#include <iosfwd>
#include <set>
#include <utility>
#include <vector>

#include "femtosim/model.hpp"
#include "femtosim/simplex.hpp"

namespace femtosim {

// Integrality / feasibility tolerance. Single source of truth for what
// counts as "integral" and for constraint checks in tests.
inline constexpr double kIntegralityTol = 1e-9;

using BsUserPair = std::pair<int, int>;  // (bs, user)

struct Fixings {
  std::set<BsUserPair> to_zero;
  std::set<BsUserPair> to_one;
};

enum class LpStatus { optimal, infeasible };

struct FractionalSolution {
  std::vector<std::vector<double>> x;  // [bs][user], fixings applied
  double objective = 0.0;              // optimal T
  LpStatus status = LpStatus::optimal;
};

// The RLP with fixings applied: free variables are the allowed (bs, user)
// pairs that are not fixed either way. Variables are ordered BS-major, which
// pins the pivot order and makes solves reproducible.
struct RlpInstance {
  const ServiceTimeProblem* problem = nullptr;
  Fixings fixings;
  std::vector<BsUserPair> variables;   // free pairs; T is appended last
  std::vector<double> base_load;       // per BS, from variables fixed to one
  std::vector<bool> user_resolved;     // user has a to_one fixing
  bool contradictory = false;          // fixings violate an assignment row

  LinearProgram to_linear_program() const;
};

RlpInstance build_rlp(const ServiceTimeProblem& problem, const Fixings& fixings);

FractionalSolution solve_rlp(const ServiceTimeProblem& problem,
                             const Fixings& fixings = {});

// number of x entries strictly between the integrality tolerances
int count_fractional(const FractionalSolution& solution);

// Debug dump in CPLEX LP text format for cross-checking with external
// solvers.
void dump_lp(const ServiceTimeProblem& problem, const Fixings& fixings,
             std::ostream& out);

}  // namespace femtosim
