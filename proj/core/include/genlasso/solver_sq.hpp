#pragma once

// Squared-loss generalized lasso:
//   minimize_beta  1/2 ||y - X beta||^2 + lambda ||D beta||_1.
// The solver returns a primal-dual pair (beta, gamma) together with the
// boundary and active sets read off from it.

#include "genlasso/problem.hpp"

#include <cstdint>
#include <optional>

namespace genlasso {

struct SolveOptions {
  NumericTolerances tol;
  /// Initial ADMM penalty parameter.
  double rho = 1.0;
  bool adaptive_rho = true;
  int max_iterations = 100000;
  /// An active-set polish is attempted every this many iterations.
  int polish_interval = 25;
  /// Random starting point for the splitting variables; zeros when unset.
  std::optional<std::uint64_t> init_seed;
};

/// Throws InputError for invalid instances, ConvergenceError when the
/// iteration cap is reached without a KKT-feasible pair.
SolveResult solve(const ProblemInstance& inst, const SolveOptions& opts = {});

KktReport kkt_check(const ProblemInstance& inst, const Vector& beta, const Vector& gamma,
                    const NumericTolerances& tol = {});

/// Criterion value 1/2 ||y - X beta||^2 + lambda ||D beta||_1.
double objective(const ProblemInstance& inst, const Vector& beta);

/// X P (XP)^+ (y - lambda (P X^T)^+ D_B^T s), P projecting onto null(D_{-B}).
Vector fit_from_boundary(const ProblemInstance& inst, const IndexSet& B, const SignVector& s,
                         const NumericTolerances& tol = {});

/// (XP)^+ (y - lambda (P X^T)^+ D_B^T s): the solution with zero component in
/// null(X) cap null(D_{-B}).
Vector solution_from_boundary(const ProblemInstance& inst, const IndexSet& B,
                              const SignVector& s, const NumericTolerances& tol = {});

/// True iff s_i D_i (solution_from_boundary + b) >= -sign_tol for every i in B.
/// Throws InputError if b is not in null(X) cap null(D_{-B}).
bool sign_feasibility(const ProblemInstance& inst, const IndexSet& B, const SignVector& s,
                      const Vector& b, const NumericTolerances& tol = {});

/// X -> M X with M = I - 11^T / n.
ProblemInstance center_problem(const ProblemInstance& inst);
/// X -> X W^{-1}, W = diag of column norms. Throws InputError on a zero column.
ProblemInstance scale_problem(const ProblemInstance& inst);
/// Centering followed by scaling.
ProblemInstance standardize_problem(const ProblemInstance& inst);

}  // namespace genlasso
