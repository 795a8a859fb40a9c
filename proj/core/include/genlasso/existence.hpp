#pragma once

// Existence of GLM generalized lasso solutions, and Stiemke's theorem of
// alternatives that underlies the logistic separation criterion.

#include "genlasso/problem.hpp"

#include <optional>
#include <string>

namespace genlasso {

enum class ExistenceStatus { guaranteed, not_guaranteed, violated };

enum class ExistenceCondition {
  /// Squared loss: a solution always exists.
  squared,
  /// lambda = 0, logistic: no quasicomplete separation.
  logistic_separation,
  /// lambda = 0, Poisson: some delta in null(X^T) with y + delta > 0.
  poisson_null_shift,
  /// lambda = 0, any other response: y in int(ran grad psi) + null(X^T).
  unregularized_range,
  /// lambda > 0: null(D) contained in null(X).
  regularized_null_space,
  /// lambda > 0 fallback: y in int(ran grad psi) + C, checked directly.
  regularized_range,
};

const char* to_string(ExistenceStatus s);
const char* to_string(ExistenceCondition c);

struct ExistenceReport {
  ExistenceStatus exists = ExistenceStatus::not_guaranteed;
  ExistenceCondition condition_checked = ExistenceCondition::squared;
  /// Separating direction b (violated logistic case), shift delta (Poisson)
  /// or interior point a of ran(grad psi) (range checks).
  std::optional<Vector> witness;
  std::string detail;
};

/// Strict inequalities are enforced with a margin of 1e-8.
ExistenceReport existence_check(const ProblemInstance& inst, const LossSpec& loss,
                                const NumericTolerances& tol = {});

enum class StiemkeSystem {
  /// A x = 0 with x < 0.
  system1,
  /// A^T y >= 0 with A^T y != 0.
  system2,
};

struct StiemkeResult {
  StiemkeSystem feasible = StiemkeSystem::system1;
  Vector witness;
};

/// Decides which of the two Stiemke systems is feasible and returns a witness.
/// Throws NumericalError if the LP solver cannot settle either system.
StiemkeResult stiemke_alternative(const Matrix& A, const NumericTolerances& tol = {});

}  // namespace genlasso
