#pragma once

// Dense two-phase simplex for the small feasibility LPs that show up in
// existence checks, theorems of alternatives and witness searches. Desk scale
// only: a full tableau is kept in memory and Bland's rule prevents cycling.

#include "genlasso/linalg.hpp"

namespace genlasso::lp {

/// minimize objective^T x  s.t.  eq x = eq_rhs,  le x <= le_rhs,
///                               lower <= x <= upper  (entries may be +-inf).
struct Problem {
  Vector objective;
  Matrix eq;
  Vector eq_rhs;
  Matrix le;
  Vector le_rhs;
  Vector lower;
  Vector upper;

  /// All variables free, no constraints.
  static Problem with_variables(int count);
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(Status s);

struct Solution {
  Status status = Status::infeasible;
  Vector x;
  double objective = 0.0;
};

Solution solve(const Problem& problem, double tol = 1e-9, int max_pivots = 50000);

}  // namespace genlasso::lp
