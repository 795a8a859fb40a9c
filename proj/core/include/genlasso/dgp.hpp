#pragma once

// Exhaustive check that X is in D-general position.
//
// For each B and s, U(B) is the Gauss-Jordan basis of null(D_{-B}) (identity
// on the free coordinates), Z = X U(B) and st = U(B)^T D_B^T s. A violation
// is a tuple (i1, ..., ik) of distinct columns, k <= n + 1, st_{i1} != 0, with
//   (i)  Z_{i2} in span(Z_{i3}, ..., Z_{ik})   when st_{i2..ik} = 0, or
//   (ii) Z_{i1}/st_{i1} in aff{Z_ij/st_ij : st_ij != 0} + span{Z_ij : st_ij = 0}
//        otherwise (j >= 2).

#include "genlasso/linalg.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace genlasso {

enum class DgpCase { span, affine };

const char* to_string(DgpCase c);

struct DgpViolation {
  IndexSet B;
  SignVector s;
  /// Column indices of Z = X U(B): i1 first, then i2 (the dependent column in
  /// the span case), then the rest.
  std::vector<int> tuple;
  DgpCase kind = DgpCase::affine;
  /// Least-squares residual of the membership test.
  double residual = 0.0;
};

struct DgpReport {
  bool in_position = true;
  std::optional<DgpViolation> violation;
  /// Membership tests performed (up to and including the first violation).
  std::int64_t enumeration_count = 0;
  /// The full enumeration exceeded the cap and was replaced by random sampling.
  bool truncated = false;
};

struct DgpOptions {
  std::int64_t cap = 2'000'000;
  std::uint64_t seed = 0;
  NumericTolerances tol;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 0;
};

DgpReport dgp_check_exhaustive(const Matrix& X, const Matrix& D, const DgpOptions& opts = {});

/// Recomputes Z and st for the violation's (B, s) and re-runs its membership
/// test. Returns the residual relative to the target norm, or +inf if the
/// violation is malformed.
double dgp_violation_residual(const Matrix& X, const Matrix& D, const DgpViolation& violation,
                              const NumericTolerances& tol = {});

}  // namespace genlasso
