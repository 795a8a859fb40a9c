#include "genlasso/linalg.hpp"

#include "genlasso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace genlasso {
namespace {

struct Svd {
  Matrix u;      // rows x min(rows, cols)
  Matrix v;      // cols x cols (full)
  Vector sigma;  // min(rows, cols), descending
  int rank = 0;
};

Svd decompose(const Matrix& a, const NumericTolerances& tol) {
  Svd out;
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  if (rows == 0 || cols == 0) {
    out.u = Matrix::Zero(rows, 0);
    out.v = Matrix::Identity(cols, cols);
    out.sigma = Vector::Zero(0);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  out.sigma = svd.singularValues();
  const double sigma_max = out.sigma(0);
  const double cutoff =
      tol.rank_tol * sigma_max * static_cast<double>(std::max(rows, cols));
  for (Eigen::Index i = 0; i < out.sigma.size(); ++i) {
    if (out.sigma(i) > cutoff) ++out.rank;
  }
  return out;
}

}  // namespace

void NumericTolerances::validate() const {
  if (!(rank_tol > 0.0) || !(residual_tol > 0.0) || !(sign_tol > 0.0)) {
    throw InputError("tolerances must be strictly positive");
  }
  if (!(sign_tol < 1.0)) throw InputError("sign_tol must be < 1");
}

SubspaceBasis::SubspaceBasis(Matrix basis, double tol)
    : basis_(std::move(basis)), tol_(tol) {
  if (basis_.cols() > basis_.rows()) {
    throw InputError("subspace basis has more columns than ambient dimension");
  }
  require_finite(basis_, "subspace basis");
  if (basis_.cols() > 0) {
    const Matrix gram = basis_.transpose() * basis_;
    const double err =
        (gram - Matrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
    if (err > std::max(tol_, 1e-10)) {
      throw InputError("subspace basis columns are not orthonormal (error " +
                       std::to_string(err) + ")");
    }
  }
}

SubspaceBasis SubspaceBasis::zero(int ambient_dim) {
  return SubspaceBasis(Matrix::Zero(ambient_dim, 0), 0.0);
}

SubspaceBasis SubspaceBasis::full(int ambient_dim) {
  return SubspaceBasis(Matrix::Identity(ambient_dim, ambient_dim), 0.0);
}

Matrix SubspaceBasis::projector() const { return basis_ * basis_.transpose(); }

int rank(const Matrix& a, const NumericTolerances& tol) {
  require_finite(a, "matrix");
  return decompose(a, tol).rank;
}

SubspaceBasis null_space_basis(const Matrix& a, const NumericTolerances& tol) {
  require_finite(a, "matrix");
  const Svd svd = decompose(a, tol);
  const Eigen::Index cols = a.cols();
  return SubspaceBasis(svd.v.rightCols(cols - svd.rank), tol.residual_tol);
}

SubspaceBasis column_space_basis(const Matrix& a, const NumericTolerances& tol) {
  require_finite(a, "matrix");
  const Svd svd = decompose(a, tol);
  return SubspaceBasis(svd.u.leftCols(svd.rank), tol.residual_tol);
}

Matrix pseudo_inverse(const Matrix& a, const NumericTolerances& tol) {
  require_finite(a, "matrix");
  const Svd svd = decompose(a, tol);
  Matrix out = Matrix::Zero(a.cols(), a.rows());
  for (int i = 0; i < svd.rank; ++i) {
    out.noalias() += (svd.v.col(i) / svd.sigma(i)) * svd.u.col(i).transpose();
  }
  return out;
}

Matrix restrict_to(const Matrix& x, const Matrix& u, const NumericTolerances& tol) {
  Matrix out = x * u;
  if (out.size() == 0) return out;
  const double floor =
      tol.rank_tol * x.norm() * static_cast<double>(std::max(x.rows(), x.cols()));
  if (out.norm() <= floor) out.setZero();
  return out;
}

Vector project(const SubspaceBasis& s, const Vector& x) {
  if (x.size() != s.ambient_dim()) {
    throw InputError("project: vector dimension " + std::to_string(x.size()) +
                     " does not match ambient dimension " +
                     std::to_string(s.ambient_dim()));
  }
  return s.basis() * (s.basis().transpose() * x);
}

double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw InputError("subspace comparison across different ambient dimensions");
  }
  if (a.dim() != b.dim()) return 1.0;
  if (a.dim() == 0) return 0.0;
  const Matrix diff = a.projector() - b.projector();
  Eigen::JacobiSVD<Matrix> svd(diff);
  return svd.singularValues()(0);
}

bool subspaces_equal(const SubspaceBasis& a, const SubspaceBasis& b,
                     const NumericTolerances& tol) {
  if (a.dim() != b.dim()) {
    if (a.ambient_dim() != b.ambient_dim()) {
      throw InputError("subspace comparison across different ambient dimensions");
    }
    return false;
  }
  return subspace_distance(a, b) < tol.residual_tol;
}

Matrix gauss_jordan_null_basis(const Matrix& a, const NumericTolerances& tol,
                               std::vector<int>* free_columns) {
  require_finite(a, "matrix");
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  Matrix r = a;
  const double scale = rows > 0 && cols > 0 ? r.cwiseAbs().maxCoeff() : 0.0;
  const double pivot_tol =
      tol.rank_tol * std::max(scale, 1e-300) * std::max(rows, cols);

  std::vector<int> pivot_cols;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    Eigen::Index best = 0;
    const double mag = r.col(col).segment(row, rows - row).cwiseAbs().maxCoeff(&best);
    if (!(mag > pivot_tol)) continue;
    const int piv = row + static_cast<int>(best);
    r.row(piv).swap(r.row(row));
    r.row(row) /= r(row, col);
    for (int i = 0; i < rows; ++i) {
      if (i != row && r(i, col) != 0.0) r.row(i) -= r(i, col) * r.row(row);
    }
    pivot_cols.push_back(col);
    ++row;
  }

  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_cols) is_pivot[c] = true;
  std::vector<int> frees;
  for (int c = 0; c < cols; ++c) {
    if (!is_pivot[c]) frees.push_back(c);
  }

  Matrix basis = Matrix::Zero(cols, static_cast<Eigen::Index>(frees.size()));
  for (std::size_t j = 0; j < frees.size(); ++j) {
    const int f = frees[j];
    basis(f, static_cast<Eigen::Index>(j)) = 1.0;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
      basis(pivot_cols[i], static_cast<Eigen::Index>(j)) =
          -r(static_cast<Eigen::Index>(i), f);
    }
  }
  if (free_columns != nullptr) *free_columns = std::move(frees);
  return basis;
}

Matrix select_rows(const Matrix& a, const IndexSet& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = a.row(rows[i]);
  }
  return out;
}

Vector select(const Vector& v, const IndexSet& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  }
  return out;
}

IndexSet complement(const IndexSet& s, int n) {
  IndexSet out;
  out.reserve(static_cast<std::size_t>(n) - std::min<std::size_t>(s.size(), n));
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    if (k < s.size() && s[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.rows() > 0 && b.rows() > 0 && a.cols() != b.cols()) {
    throw InputError("vstack: column counts differ");
  }
  const Eigen::Index cols = a.rows() > 0 ? a.cols() : b.cols();
  Matrix out(a.rows() + b.rows(), cols);
  if (a.rows() > 0) out.topRows(a.rows()) = a;
  if (b.rows() > 0) out.bottomRows(b.rows()) = b;
  return out;
}

void require_finite(const Matrix& a, std::string_view what) {
  if (!a.allFinite()) {
    throw InputError(std::string(what) + " has non-finite entries");
  }
}

void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) {
    throw InputError(std::string(what) + " has non-finite entries");
  }
}

}  // namespace genlasso
