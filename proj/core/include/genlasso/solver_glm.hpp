#pragma once

// Generalized lasso with a GLM loss:
//   minimize_beta  -y^T X beta + psi(X beta) + lambda ||D beta||_1.

#include "genlasso/problem.hpp"
#include "genlasso/solver_sq.hpp"

namespace genlasso {

struct GlmSolveOptions {
  /// Options for the inner squared-loss solves (tolerances are shared).
  SolveOptions inner;
  /// ||X beta||_inf beyond this is taken as evidence that no minimizer exists.
  double max_fit_norm = 30.0;
  int max_newton_iterations = 200;
};

/// Proximal Newton. For the squared family this is exactly solve().
/// Throws NoSolutionError when the fit diverges, ConvergenceError when the
/// outer or inner iteration cap is reached.
SolveResult solve_glm(const ProblemInstance& inst, const LossSpec& loss,
                      const GlmSolveOptions& opts = {});

KktReport kkt_check_glm(const ProblemInstance& inst, const LossSpec& loss, const Vector& beta,
                        const Vector& gamma, const NumericTolerances& tol = {});

/// grad psi^*( Bregman projection of grad psi(0) onto y - K_{B,s} ), with
/// K_{B,s} = lambda (P X^T)^+ D_B^T s + null(P X^T), P projecting onto
/// null(D_{-B}). Also valid with (A, r) in place of (B, s).
Vector fit_from_boundary_glm(const ProblemInstance& inst, const LossSpec& loss,
                             const IndexSet& B, const SignVector& s,
                             const NumericTolerances& tol = {});

/// (X P)^+ applied to fit_from_boundary_glm.
Vector solution_from_boundary_glm(const ProblemInstance& inst, const LossSpec& loss,
                                  const IndexSet& B, const SignVector& s,
                                  const NumericTolerances& tol = {});

}  // namespace genlasso
