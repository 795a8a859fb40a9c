#include "genlasso/existence.hpp"

#include "genlasso/errors.hpp"
#include "genlasso/lp.hpp"

#include <cmath>
#include <limits>

namespace genlasso {
namespace {

constexpr double kMargin = 1e-8;

bool is_binary(const Vector& y) {
  return (y.array() == 0.0 || y.array() == 1.0).all();
}

// Largest margin delta such that some a with lower + delta <= a <= upper - delta
// satisfies X^T a + D^T v = X^T y with |v| <= lambda (v absent when D is empty
// or lambda = 0). Returns delta and fills `a`.
double range_margin(const LossSpec& loss, const ProblemInstance& inst, bool with_penalty, Vector& a) {
  const int n = inst.n();
  const int p = inst.p();
  const int m = with_penalty ? inst.m() : 0;
  const bool has_lower = std::isfinite(loss.conj_lower);
  const bool has_upper = std::isfinite(loss.conj_upper);
  // Variables (a, v, delta).
  lp::Problem prob = lp::Problem::with_variables(n + m + 1);
  prob.objective(n + m) = -1.0;
  prob.upper(n + m) = (has_lower && has_upper) ? 0.25 * (loss.conj_upper - loss.conj_lower) : 1.0;
  prob.eq = Matrix::Zero(p, n + m + 1);
  prob.eq.leftCols(n) = inst.X.transpose();
  if (m) prob.eq.middleCols(n, m) = inst.D.transpose();
  prob.eq_rhs = inst.X.transpose() * inst.y;
  for (int j = 0; j < m; ++j) {
    prob.lower(n + j) = -inst.lambda;
    prob.upper(n + j) = inst.lambda;
  }
  const int rows = (has_lower ? n : 0) + (has_upper ? n : 0);
  prob.le = Matrix::Zero(rows, n + m + 1);
  prob.le_rhs = Vector::Zero(rows);
  int row = 0;
  if (has_lower) {
    for (int i = 0; i < n; ++i, ++row) {
      prob.le(row, i) = -1.0;
      prob.le(row, n + m) = 1.0;
      prob.le_rhs(row) = -loss.conj_lower;
    }
  }
  if (has_upper) {
    for (int i = 0; i < n; ++i, ++row) {
      prob.le(row, i) = 1.0;
      prob.le(row, n + m) = 1.0;
      prob.le_rhs(row) = loss.conj_upper;
    }
  }
  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::optimal) return -std::numeric_limits<double>::infinity();
  a = sol.x.head(n);
  return sol.x(n + m);
}

ExistenceReport logistic_separation(const ProblemInstance& inst) {
  ExistenceReport report;
  report.condition_checked = ExistenceCondition::logistic_separation;
  const Vector Y = 2.0 * inst.y.array() - 1.0;
  const Matrix YX = Y.asDiagonal() * inst.X;
  // Quasicomplete separation: D_Y X b >= 0 with D_Y X b != 0 (normalized to
  // sum one).
  lp::Problem prob = lp::Problem::with_variables(inst.p());
  prob.le = -YX;
  prob.le_rhs = Vector::Zero(inst.n());
  prob.eq = YX.colwise().sum();
  prob.eq_rhs = Vector::Ones(1);
  const lp::Solution sol = lp::solve(prob);
  if (sol.status == lp::Status::optimal) {
    report.exists = ExistenceStatus::violated;
    report.witness = sol.x;
    report.detail = "the classes are quasicompletely separated by the witness direction b; the MLE does not exist";
  } else {
    report.exists = ExistenceStatus::guaranteed;
    report.detail = "no quasicomplete separation";
  }
  return report;
}

ExistenceReport poisson_null_shift(const ProblemInstance& inst) {
  ExistenceReport report;
  report.condition_checked = ExistenceCondition::poisson_null_shift;
  const int n = inst.n();
  // Variables (delta, t): X^T delta = 0, y + delta >= t, maximize t <= 1.
  lp::Problem prob = lp::Problem::with_variables(n + 1);
  prob.objective(n) = -1.0;
  prob.upper(n) = 1.0;
  prob.eq = Matrix::Zero(inst.p(), n + 1);
  prob.eq.leftCols(n) = inst.X.transpose();
  prob.eq_rhs = Vector::Zero(inst.p());
  prob.le = Matrix::Zero(n, n + 1);
  prob.le.leftCols(n) = -Matrix::Identity(n, n);
  prob.le.col(n).setOnes();
  prob.le_rhs = inst.y;
  const lp::Solution sol = lp::solve(prob);
  if (sol.status == lp::Status::optimal && sol.x(n) > kMargin) {
    report.exists = ExistenceStatus::guaranteed;
    report.witness = sol.x.head(n);
    report.detail = "found delta in null(X^T) with y + delta > 0";
  } else {
    report.exists = ExistenceStatus::violated;
    report.detail = "no delta in null(X^T) makes y + delta strictly positive; the MLE does not exist";
  }
  return report;
}

}  // namespace

const char* to_string(ExistenceStatus s) {
  switch (s) {
    case ExistenceStatus::guaranteed: return "guaranteed";
    case ExistenceStatus::not_guaranteed: return "not_guaranteed";
    case ExistenceStatus::violated: return "violated";
  }
  return "unknown";
}

const char* to_string(ExistenceCondition c) {
  switch (c) {
    case ExistenceCondition::squared: return "squared";
    case ExistenceCondition::logistic_separation: return "logistic_separation";
    case ExistenceCondition::poisson_null_shift: return "poisson_null_shift";
    case ExistenceCondition::unregularized_range: return "unregularized_range";
    case ExistenceCondition::regularized_null_space: return "regularized_null_space";
    case ExistenceCondition::regularized_range: return "regularized_range";
  }
  return "unknown";
}

ExistenceReport existence_check(const ProblemInstance& inst, const LossSpec& loss,
                                const NumericTolerances& tol) {
  inst.validate();
  tol.validate();
  ExistenceReport report;
  if (loss.family == LossFamily::squared) {
    report.exists = ExistenceStatus::guaranteed;
    report.condition_checked = ExistenceCondition::squared;
    report.detail = "squared loss always attains its minimum";
    return report;
  }

  if (inst.lambda == 0.0 || inst.m() == 0) {
    if (loss.family == LossFamily::logistic && is_binary(inst.y)) return logistic_separation(inst);
    if (loss.family == LossFamily::poisson) return poisson_null_shift(inst);
    report.condition_checked = ExistenceCondition::unregularized_range;
    Vector a;
    if (range_margin(loss, inst, false, a) > kMargin) {
      report.exists = ExistenceStatus::guaranteed;
      report.witness = a;
      report.detail = "y - a lies in null(X^T) for the interior point a";
    } else {
      report.exists = loss.family == LossFamily::custom ? ExistenceStatus::not_guaranteed
                                                        : ExistenceStatus::violated;
      report.detail = "y is not in int(ran(grad psi)) + null(X^T)";
    }
    return report;
  }

  if (rank(vstack(inst.X, inst.D), tol) == rank(inst.D, tol)) {
    report.exists = ExistenceStatus::guaranteed;
    report.condition_checked = ExistenceCondition::regularized_null_space;
    report.detail = "null(D) is contained in null(X)";
    return report;
  }
  report.condition_checked = ExistenceCondition::regularized_range;
  Vector a;
  if (range_margin(loss, inst, true, a) > kMargin) {
    report.exists = ExistenceStatus::guaranteed;
    report.witness = a;
    report.detail = "null(D) is not contained in null(X), but y - a lies in C for the interior point a";
  } else {
    report.exists = ExistenceStatus::not_guaranteed;
    report.detail = "null(D) is not contained in null(X) and y is not in int(ran(grad psi)) + C";
  }
  return report;
}

StiemkeResult stiemke_alternative(const Matrix& A, const NumericTolerances& tol) {
  require_finite(A, "A");
  tol.validate();
  const int n = static_cast<int>(A.rows());
  const int p = static_cast<int>(A.cols());

  {
    lp::Problem prob = lp::Problem::with_variables(p);
    prob.eq = A;
    prob.eq_rhs = Vector::Zero(n);
    prob.upper = Vector::Constant(p, -1.0);
    const lp::Solution sol = lp::solve(prob);
    if (sol.status == lp::Status::optimal) return {StiemkeSystem::system1, sol.x};
  }
  {
    lp::Problem prob = lp::Problem::with_variables(n);
    prob.le = -A.transpose();
    prob.le_rhs = Vector::Zero(p);
    prob.eq = A.transpose().colwise().sum();
    prob.eq_rhs = Vector::Ones(1);
    const lp::Solution sol = lp::solve(prob);
    if (sol.status == lp::Status::optimal) return {StiemkeSystem::system2, sol.x};
  }
  throw NumericalError("stiemke_alternative: neither system could be certified feasible");
}

}  // namespace genlasso
