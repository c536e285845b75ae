#pragma once

// Exact integer feasibility for conjunctions of linear constraints.
//
// Equalities are eliminated first with unimodular substitutions (extended
// Euclid on the smallest coefficient), which detects gcd conflicts exactly.
// The remaining inequalities go to a bounded-variable simplex with Bland's
// rule; integrality is enforced by depth-first branch and bound (lowest
// fractional variable, floor branch first). The search runs in growing boxes
// whose last one is a small-model bound for integer programming, so it is
// finite and complete.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "sfacheck/numeric.hpp"

namespace sfacheck::detail {

/// sum(coef[v] * x_v) + constant  (== 0 | <= 0)
struct LinearConstraint {
  std::map<std::size_t, Int> coef;
  Int constant;
  bool equality = false;
};

struct IntegerProblem {
  std::size_t num_vars = 0;
  std::vector<LinearConstraint> constraints;
};

struct SearchBudget {
  std::size_t max_branch_nodes = 200000;
  std::size_t branch_nodes = 0;
  std::size_t simplex_runs = 0;
};

/// Feasibility of the rational relaxation (after exact equality
/// elimination, so gcd-infeasible equalities are already rejected).
bool relaxation_feasible(const IntegerProblem& problem);

/// An integer solution for x_0..x_{num_vars-1}, or nothing when none
/// exists. Throws ResourceLimit when the branch budget runs out.
std::optional<std::vector<Int>> solve_integer(const IntegerProblem& problem, SearchBudget& budget);

/// Papadimitriou's bound with one unit of slack, (2n+m+1)(m*a)^(2m+1), for
/// m constraints over n variables with coefficients and constants bounded
/// by a.
Int small_model_bound(std::size_t n, std::size_t m, const Int& a);

}  // namespace sfacheck::detail
