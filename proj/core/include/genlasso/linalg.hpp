#pragma once

// Tolerance-aware dense linear algebra: rank, null spaces, pseudoinverses,
// orthogonal projections and subspace comparison. Everything here is built on
// a singular value decomposition with a relative cutoff, so all routines agree
// on what "numerically zero" means for a given NumericTolerances.

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace genlasso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted, duplicate-free, 0-based row indices (boundary and active sets).
using IndexSet = std::vector<int>;
/// Entries in {-1, +1}, aligned with an IndexSet.
using SignVector = std::vector<int>;

struct NumericTolerances {
  /// Relative singular value cutoff: sigma counts toward the rank when
  /// sigma > rank_tol * sigma_max * max(rows, cols).
  double rank_tol = 1e-9;
  /// Bound on KKT residuals and other "should be zero" quantities.
  double residual_tol = 1e-8;
  /// |gamma_i| >= 1 - sign_tol puts i on the boundary.
  double sign_tol = 1e-6;

  /// Throws InputError unless all three are positive and sign_tol < 1.
  void validate() const;
};

/// Orthonormal basis of a linear subspace of R^ambient_dim.
class SubspaceBasis {
 public:
  /// `basis` must have orthonormal columns (checked against `tol`).
  SubspaceBasis(Matrix basis, double tol);

  static SubspaceBasis zero(int ambient_dim);
  static SubspaceBasis full(int ambient_dim);

  int ambient_dim() const noexcept { return static_cast<int>(basis_.rows()); }
  int dim() const noexcept { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const noexcept { return basis_; }
  double tol() const noexcept { return tol_; }

  /// Orthogonal projector B * B^T.
  Matrix projector() const;

 private:
  Matrix basis_;
  double tol_;
};

int rank(const Matrix& a, const NumericTolerances& tol = {});

SubspaceBasis null_space_basis(const Matrix& a, const NumericTolerances& tol = {});
SubspaceBasis column_space_basis(const Matrix& a, const NumericTolerances& tol = {});

Matrix pseudo_inverse(const Matrix& a, const NumericTolerances& tol = {});

/// X U, flushed to zero when it is roundoff relative to X (rank decisions on
/// the product are otherwise scale-relative and would see noise as rank).
Matrix restrict_to(const Matrix& x, const Matrix& u, const NumericTolerances& tol = {});

/// Orthogonal projection of x onto span(s).
Vector project(const SubspaceBasis& s, const Vector& x);

/// Spectral norm of the difference of the two orthogonal projectors, i.e. the
/// sine of the largest principal angle (1 when dimensions differ).
double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b);

bool subspaces_equal(const SubspaceBasis& a, const SubspaceBasis& b,
                     const NumericTolerances& tol = {});

/// Null-space basis in reduced-row-echelon form: after permuting rows to put
/// the free columns first, the basis reads [I; F]. Columns are *not*
/// orthonormal. `free_columns` (optional) receives the free variable index
/// that carries the identity entry of each basis column.
Matrix gauss_jordan_null_basis(const Matrix& a, const NumericTolerances& tol = {},
                               std::vector<int>* free_columns = nullptr);

// Small helpers shared by the solvers.

Matrix select_rows(const Matrix& a, const IndexSet& rows);
Vector select(const Vector& v, const IndexSet& idx);
/// {0, ..., n-1} \ s, for sorted s.
IndexSet complement(const IndexSet& s, int n);
/// [a; b] (either may have zero rows).
Matrix vstack(const Matrix& a, const Matrix& b);

/// Throws InputError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& a, std::string_view what);
void require_finite(const Vector& v, std::string_view what);

}  // namespace genlasso
