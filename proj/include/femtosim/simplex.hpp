#pragma once

// Self-contained dense two-phase primal simplex. Instances in this project
// are tiny (a few hundred variables), so a dense tableau with deterministic
// pivoting is both simple and fast enough. Pricing is most-negative reduced
// cost with lowest-index ties; after a long run of degenerate pivots the
// solver switches to Bland's rule, which cannot cycle.

#include <vector>

namespace femtosim {

enum class Relation { less_equal, equal, greater_equal };

struct LinearProgram {
  // minimize objective . x  subject to  rows, x >= 0
  int num_vars = 0;
  std::vector<double> objective;
  struct Constraint {
    std::vector<double> coeffs;  // length num_vars
    Relation relation = Relation::less_equal;
    double rhs = 0.0;
  };
  std::vector<Constraint> constraints;
};

enum class SimplexStatus { optimal, infeasible, unbounded, iteration_limit };

struct SimplexSolution {
  SimplexStatus status = SimplexStatus::iteration_limit;
  std::vector<double> values;  // length num_vars, valid when optimal
  double objective = 0.0;
};

SimplexSolution solve_simplex(const LinearProgram& lp);

}  // namespace femtosim
