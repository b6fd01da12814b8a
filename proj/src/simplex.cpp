#include "femtosim/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace femtosim {

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-8;
constexpr int kDegenerateBeforeBland = 256;
constexpr int kMaxPivots = 100000;

// Dense tableau; row 0..m-1 are constraints, the two cost rows are kept
// separately. Column layout: original vars, slack/surplus, artificials, rhs.
struct Tableau {
  int rows = 0;
  int cols = 0;  // without rhs
  std::vector<double> data;  // rows x (cols + 1)
  std::vector<int> basis;    // basic column per row

  double* row(int i) { return data.data() + static_cast<size_t>(i) * (cols + 1); }
  double& at(int i, int j) { return row(i)[j]; }
  double& rhs(int i) { return row(i)[cols]; }
};

void pivot_row(double* target, const double* pivot, double factor, int width) {
  if (factor == 0.0) return;
  for (int j = 0; j < width; ++j) target[j] -= factor * pivot[j];
}

// Runs simplex iterations on `tab` with reduced-cost row `cost` (length
// cols+1). `banned[j]` columns never enter. Returns optimal/unbounded/
// iteration_limit.
SimplexStatus iterate(Tableau& tab, std::vector<double>& cost,
                      std::vector<double>& other_cost,
                      const std::vector<bool>& banned) {
  const int width = tab.cols + 1;
  bool bland = false;
  int degenerate_streak = 0;

  for (int iter = 0; iter < kMaxPivots; ++iter) {
    // entering column
    int entering = -1;
    if (bland) {
      for (int j = 0; j < tab.cols; ++j) {
        if (!banned[j] && cost[j] < -kCostTol) {
          entering = j;
          break;
        }
      }
    } else {
      double best = -kCostTol;
      for (int j = 0; j < tab.cols; ++j) {
        if (!banned[j] && cost[j] < best) {
          best = cost[j];
          entering = j;
        }
      }
    }
    if (entering < 0) return SimplexStatus::optimal;

    // ratio test; ties resolved toward the smallest basic variable index,
    // which is what Bland's rule requires for the leaving side
    int leaving = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < tab.rows; ++i) {
      double a = tab.at(i, entering);
      if (a <= kPivotTol) continue;
      double ratio = tab.rhs(i) / a;
      if (leaving < 0 || ratio < best_ratio - kPivotTol ||
          (ratio < best_ratio + kPivotTol && tab.basis[i] < tab.basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving < 0) return SimplexStatus::unbounded;

    if (best_ratio <= kPivotTol) {
      if (++degenerate_streak >= kDegenerateBeforeBland) bland = true;
    } else {
      degenerate_streak = 0;
    }

    // pivot
    double* prow = tab.row(leaving);
    double inv = 1.0 / prow[entering];
    for (int j = 0; j < width; ++j) prow[j] *= inv;
    prow[entering] = 1.0;
    for (int i = 0; i < tab.rows; ++i) {
      if (i == leaving) continue;
      pivot_row(tab.row(i), prow, tab.at(i, entering), width);
      tab.at(i, entering) = 0.0;
      if (tab.rhs(i) < 0.0 && tab.rhs(i) > -kCostTol) tab.rhs(i) = 0.0;
    }
    pivot_row(cost.data(), prow, cost[entering], width);
    cost[entering] = 0.0;
    pivot_row(other_cost.data(), prow, other_cost[entering], width);
    other_cost[entering] = 0.0;
    tab.basis[leaving] = entering;
  }
  return SimplexStatus::iteration_limit;
}

}  // namespace

SimplexSolution solve_simplex(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.constraints.size());
  if (static_cast<int>(lp.objective.size()) != n)
    throw std::invalid_argument("objective size mismatch");

  // count auxiliary columns
  int num_slack = 0, num_artificial = 0;
  for (const auto& c : lp.constraints) {
    if (static_cast<int>(c.coeffs.size()) != n)
      throw std::invalid_argument("constraint size mismatch");
    bool flip = c.rhs < 0.0;
    Relation rel = c.relation;
    if (flip) {
      if (rel == Relation::less_equal) rel = Relation::greater_equal;
      else if (rel == Relation::greater_equal) rel = Relation::less_equal;
    }
    if (rel == Relation::less_equal) ++num_slack;
    else if (rel == Relation::greater_equal) { ++num_slack; ++num_artificial; }
    else ++num_artificial;
  }

  Tableau tab;
  tab.rows = m;
  tab.cols = n + num_slack + num_artificial;
  tab.data.assign(static_cast<size_t>(m) * (tab.cols + 1), 0.0);
  tab.basis.assign(m, -1);

  const int slack_base = n;
  const int artificial_base = n + num_slack;
  int next_slack = 0, next_artificial = 0;

  for (int i = 0; i < m; ++i) {
    const auto& c = lp.constraints[i];
    double sign = c.rhs < 0.0 ? -1.0 : 1.0;
    Relation rel = c.relation;
    if (sign < 0.0) {
      if (rel == Relation::less_equal) rel = Relation::greater_equal;
      else if (rel == Relation::greater_equal) rel = Relation::less_equal;
    }
    for (int j = 0; j < n; ++j) tab.at(i, j) = sign * c.coeffs[j];
    tab.rhs(i) = sign * c.rhs;

    if (rel == Relation::less_equal) {
      int col = slack_base + next_slack++;
      tab.at(i, col) = 1.0;
      tab.basis[i] = col;
    } else {
      if (rel == Relation::greater_equal) {
        int col = slack_base + next_slack++;
        tab.at(i, col) = -1.0;  // surplus
      }
      int art = artificial_base + next_artificial++;
      tab.at(i, art) = 1.0;
      tab.basis[i] = art;
    }
  }

  // phase-2 cost row (reduced already: every initial basic column has zero
  // phase-2 cost) and phase-1 cost row reduced against the artificial basis
  std::vector<double> cost2(tab.cols + 1, 0.0);
  for (int j = 0; j < n; ++j) cost2[j] = lp.objective[j];
  std::vector<double> cost1(tab.cols + 1, 0.0);
  for (int j = artificial_base; j < tab.cols; ++j) cost1[j] = 1.0;
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] >= artificial_base)
      pivot_row(cost1.data(), tab.row(i), 1.0, tab.cols + 1);
  }

  std::vector<bool> banned(tab.cols, false);
  SimplexSolution result;

  if (num_artificial > 0) {
    SimplexStatus s = iterate(tab, cost1, cost2, banned);
    if (s != SimplexStatus::optimal) {
      // phase-1 objective is bounded below by 0, so anything but optimal
      // here is a numerical failure
      result.status = SimplexStatus::iteration_limit;
      return result;
    }
    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i)
      if (tab.basis[i] >= artificial_base) infeasibility += tab.rhs(i);
    if (infeasibility > kFeasTol) {
      result.status = SimplexStatus::infeasible;
      return result;
    }
    for (int j = artificial_base; j < tab.cols; ++j) banned[j] = true;
    // drive leftover artificials out of the basis where possible; rows that
    // offer no pivot are redundant and stay inert
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < artificial_base) continue;
      for (int j = 0; j < artificial_base; ++j) {
        if (std::abs(tab.at(i, j)) > kPivotTol) {
          double* prow = tab.row(i);
          double inv = 1.0 / prow[j];
          for (int k = 0; k <= tab.cols; ++k) prow[k] *= inv;
          prow[j] = 1.0;
          for (int r = 0; r < m; ++r) {
            if (r == i) continue;
            pivot_row(tab.row(r), prow, tab.at(r, j), tab.cols + 1);
            tab.at(r, j) = 0.0;
          }
          pivot_row(cost1.data(), prow, cost1[j], tab.cols + 1);
          pivot_row(cost2.data(), prow, cost2[j], tab.cols + 1);
          cost2[j] = 0.0;
          tab.basis[i] = j;
          break;
        }
      }
    }
  }

  SimplexStatus s = iterate(tab, cost2, cost1, banned);
  if (s != SimplexStatus::optimal) {
    result.status = s;
    return result;
  }

  result.status = SimplexStatus::optimal;
  result.values.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < n) result.values[tab.basis[i]] = tab.rhs(i);
  }
  result.objective = 0.0;
  for (int j = 0; j < n; ++j) result.objective += lp.objective[j] * result.values[j];
  return result;
}

}  // namespace femtosim
