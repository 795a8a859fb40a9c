#include "genlasso/problem.hpp"

#include "genlasso/errors.hpp"

#include <cmath>
#include <string>

namespace genlasso {

void ProblemInstance::validate() const {
  if (X.rows() == 0 || X.cols() == 0) throw InputError("X must be non-empty");
  if (y.size() != X.rows()) {
    throw InputError("y has length " + std::to_string(y.size()) + " but X has " +
                     std::to_string(X.rows()) + " rows");
  }
  if (D.cols() != X.cols()) {
    throw InputError("D has " + std::to_string(D.cols()) + " columns but X has " +
                     std::to_string(X.cols()));
  }
  if (!std::isfinite(lambda) || lambda < 0.0) throw InputError("lambda must be finite and >= 0");
  require_finite(y, "y");
  require_finite(X, "X");
  require_finite(D, "D");
}

KktReport evaluate_kkt(const Vector& score, const Matrix& D, const Vector& beta,
                       const Vector& gamma, double lambda, const NumericTolerances& tol) {
  if (gamma.size() != D.rows() || beta.size() != D.cols() || score.size() != D.cols()) {
    throw InputError("evaluate_kkt: dimension mismatch");
  }
  KktReport report;
  report.stationarity_residual =
      D.cols() == 0 ? 0.0 : (score - lambda * (D.transpose() * gamma)).lpNorm<Eigen::Infinity>();

  const Vector d_beta = D * beta;
  const double scale = std::max(1.0, d_beta.size() ? d_beta.lpNorm<Eigen::Infinity>() : 0.0);
  const double threshold = tol.sign_tol * scale;
  double violation = 0.0;
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    violation = std::max(violation, std::abs(gamma(i)) - 1.0);
    if (std::abs(d_beta(i)) > threshold) {
      const double sign = d_beta(i) > 0.0 ? 1.0 : -1.0;
      violation = std::max(violation, std::abs(gamma(i) - sign));
    }
  }
  report.subgradient_violation = violation;
  report.feasible = report.stationarity_residual <= tol.residual_tol &&
                    report.subgradient_violation <= tol.residual_tol;
  return report;
}

SignedSet extract_boundary(const Vector& gamma, const NumericTolerances& tol) {
  SignedSet out;
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    if (std::abs(gamma(i)) >= 1.0 - tol.sign_tol) {
      out.indices.push_back(static_cast<int>(i));
      out.signs.push_back(gamma(i) > 0.0 ? 1 : -1);
    }
  }
  return out;
}

SignedSet extract_active(const Matrix& D, const Vector& beta, const NumericTolerances& tol) {
  if (D.cols() != beta.size()) throw InputError("extract_active: D and beta disagree");
  SignedSet out;
  const Vector d_beta = D * beta;
  if (d_beta.size() == 0) return out;
  const double threshold = tol.sign_tol * std::max(1.0, d_beta.lpNorm<Eigen::Infinity>());
  for (Eigen::Index i = 0; i < d_beta.size(); ++i) {
    if (std::abs(d_beta(i)) > threshold) {
      out.indices.push_back(static_cast<int>(i));
      out.signs.push_back(d_beta(i) > 0.0 ? 1 : -1);
    }
  }
  return out;
}

void validate_signed_set(const IndexSet& indices, const SignVector& signs, int m) {
  if (indices.size() != signs.size()) throw InputError("index set and sign vector differ in length");
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= m) throw InputError("index out of range");
    if (k > 0 && indices[k] <= indices[k - 1]) throw InputError("index set must be sorted and unique");
    if (signs[k] != 1 && signs[k] != -1) throw InputError("signs must be +1 or -1");
  }
}

}  // namespace genlasso
