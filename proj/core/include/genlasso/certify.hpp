#pragma once

// Uniqueness certification for generalized lasso solutions.
//
// With U(B) an orthonormal basis of null(D_{-B}) for the boundary set B of an
// optimal subgradient, rank(X U(B)) = dim null(D_{-B}) is sufficient for
// uniqueness. When it fails, every other solution differs from the computed
// one by some b in null(X) cap null(D_{-B}) that keeps the boundary signs, so
// the witness search below decides the question up to numerical tolerance.

#include "genlasso/existence.hpp"
#include "genlasso/problem.hpp"
#include "genlasso/solver_glm.hpp"

#include <optional>
#include <string>
#include <vector>

namespace genlasso {

enum class Verdict { unique, non_unique, undetermined };

const char* to_string(Verdict v);

struct NullIntersection {
  bool trivial = true;
  /// p - rank([X; D]).
  int dim = 0;
};

NullIntersection null_intersection_trivial(const Matrix& X, const Matrix& D,
                                           const NumericTolerances& tol = {});

struct Cond1Check {
  bool holds = false;
  int rank = 0;
  /// k(B) = dim null(D_{-B}).
  int k = 0;
};

Cond1Check check_cond1(const ProblemInstance& inst, const SolveResult& result,
                       const NumericTolerances& tol = {});

struct Witness {
  /// Unit direction b in null(X) cap null(D_{-B}).
  Vector direction;
  double step = 0.0;
  /// beta_2 = beta + step * direction.
  Vector beta2;
  /// Subgradient paired with beta_2 (the original gamma when lambda > 0).
  Vector gamma2;
  double fit_discrepancy = 0.0;
  double penalty_discrepancy = 0.0;
};

/// Searches for a second solution. Returns a witness only after verifying
/// that beta_2 passes the KKT check with equal fit and penalty.
std::optional<Witness> nonuniqueness_witness(const ProblemInstance& inst, const SolveResult& result,
                                             const LossSpec& loss = LossSpec::squared(),
                                             const NumericTolerances& tol = {});

struct UniquenessCertificate {
  Verdict verdict = Verdict::undetermined;
  LossFamily loss = LossFamily::squared;
  IndexSet boundary_set_used;
  SignVector boundary_signs_used;
  /// (rank(X U(B)), k(B)).
  int rank_xu = 0;
  int k_b = 0;
  int null_intersection_dim = 0;
  std::optional<Witness> witness;
  std::optional<ExistenceReport> existence;
  /// The solve the certificate is based on, when it succeeded.
  std::optional<SolveResult> solution;
  std::vector<std::string> notes;
};

struct CertifyOptions {
  GlmSolveOptions solver;
  /// Relative tolerance for the implicit-form cross-check of a unique solution.
  double cross_check_tol = 1e-6;
};

/// Solves the instance and certifies the result. Solver failures and existence
/// violations produce an undetermined verdict with notes rather than throwing.
UniquenessCertificate certify_uniqueness(const ProblemInstance& inst,
                                         const LossSpec& loss = LossSpec::squared(),
                                         const CertifyOptions& opts = {});

/// Certifies an already computed KKT-feasible result.
UniquenessCertificate certify_result(const ProblemInstance& inst, const LossSpec& loss,
                                     const SolveResult& result, const CertifyOptions& opts = {});

}  // namespace genlasso
