#pragma once

#include "genlasso/linalg.hpp"
#include "genlasso/loss.hpp"

namespace genlasso {

/// minimize_beta  G(X beta; y) + lambda * ||D beta||_1, with G the squared
/// loss unless a GLM loss is supplied to the solver.
struct ProblemInstance {
  Vector y;
  Matrix X;
  Matrix D;
  double lambda = 0.0;

  int n() const noexcept { return static_cast<int>(X.rows()); }
  int p() const noexcept { return static_cast<int>(X.cols()); }
  int m() const noexcept { return static_cast<int>(D.rows()); }

  /// Throws InputError on inconsistent shapes, non-finite entries or a
  /// negative lambda.
  void validate() const;
};

struct KktReport {
  /// ||X^T (y - grad psi(X beta)) - lambda D^T gamma||_inf
  double stationarity_residual = 0.0;
  /// Largest violation of gamma being a subgradient of ||.||_1 at D beta.
  double subgradient_violation = 0.0;
  bool feasible = false;
};

struct SignedSet {
  IndexSet indices;
  SignVector signs;
};

struct SolveResult {
  LossFamily loss = LossFamily::squared;
  Vector beta;
  Vector gamma;
  Vector fit;
  /// Dual pair: u = lambda * gamma, v = y - grad psi(fit).
  Vector dual_u;
  Vector dual_v;
  IndexSet boundary_set;
  SignVector boundary_signs;
  IndexSet active_set;
  SignVector active_signs;
  KktReport kkt;
  double objective = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
  /// Set when non-uniqueness is evident from the data alone (lambda = 0 with
  /// rank(X) < p, or a nontrivial null(X) cap null(D)).
  bool flagged_non_unique = false;
};

/// KKT residuals given the score X^T (y - grad psi(X beta)).
KktReport evaluate_kkt(const Vector& score, const Matrix& D, const Vector& beta,
                       const Vector& gamma, double lambda, const NumericTolerances& tol);

/// B = {i : |gamma_i| >= 1 - sign_tol}, s = sign(gamma_B).
SignedSet extract_boundary(const Vector& gamma, const NumericTolerances& tol = {});

/// A = {i : |(D beta)_i| > sign_tol * max(1, ||D beta||_inf)}, r = signs there.
SignedSet extract_active(const Matrix& D, const Vector& beta, const NumericTolerances& tol = {});

/// Throws InputError unless `signs` matches `indices` in length, the indices
/// are sorted, unique and below m, and every sign is +-1.
void validate_signed_set(const IndexSet& indices, const SignVector& signs, int m);

}  // namespace genlasso
