#include "genlasso/bregman.hpp"

#include "genlasso/errors.hpp"
#include "genlasso/lp.hpp"

#include <cmath>
#include <limits>

namespace genlasso {
namespace {

// Point of c + L t with the largest margin to the domain boundary (capped at
// 1/4 of the domain width or 1).
Vector interior_start(const LossSpec& loss, const Vector& c, const Matrix& L) {
  const Eigen::Index n = c.size();
  const Eigen::Index k = L.cols();
  const bool has_lower = std::isfinite(loss.conj_lower);
  const bool has_upper = std::isfinite(loss.conj_upper);
  const Eigen::Index rows = (has_lower ? n : 0) + (has_upper ? n : 0);

  // Variables (t, delta); maximize delta.
  lp::Problem prob = lp::Problem::with_variables(static_cast<int>(k + 1));
  prob.objective(k) = -1.0;
  prob.upper(k) = (has_lower && has_upper) ? 0.25 * (loss.conj_upper - loss.conj_lower) : 1.0;
  prob.le = Matrix::Zero(rows, k + 1);
  prob.le_rhs = Vector::Zero(rows);
  Eigen::Index row = 0;
  if (has_lower) {
    // lower + delta <= c + L t
    prob.le.block(row, 0, n, k) = -L;
    prob.le.block(row, k, n, 1).setOnes();
    prob.le_rhs.segment(row, n) = c.array() - loss.conj_lower;
    row += n;
  }
  if (has_upper) {
    prob.le.block(row, 0, n, k) = L;
    prob.le.block(row, k, n, 1).setOnes();
    prob.le_rhs.segment(row, n) = loss.conj_upper - c.array();
  }
  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::optimal || sol.x(k) <= 1e-12) {
    throw NumericalError(
        "Bregman projection: the affine set does not meet the interior of dom(psi^*), so the "
        "criterion does not attain its infimum");
  }
  return sol.x.head(k);
}

}  // namespace

Vector bregman_project_affine(const LossSpec& loss, const Vector& c, const SubspaceBasis& L,
                              const Vector& a, const NumericTolerances& tol) {
  const Eigen::Index n = c.size();
  if (a.size() != n || L.ambient_dim() != n) {
    throw InputError("bregman_project_affine: dimension mismatch");
  }
  require_finite(c, "c");
  require_finite(a, "a");
  if (!loss.in_conj_domain_interior(a)) {
    throw InputError("bregman_project_affine: a is not in the interior of dom(psi^*)");
  }
  const Matrix& B = L.basis();
  const Eigen::Index k = B.cols();
  // The component of c inside L is irrelevant; drop it for conditioning.
  const Vector c0 = k ? Vector(c - B * (B.transpose() * c)) : c;
  if (k == 0) {
    if (!loss.in_conj_domain_interior(c0) && loss.family != LossFamily::squared) {
      throw NumericalError("Bregman projection: c lies outside the interior of dom(psi^*)");
    }
    return c0;
  }

  const Vector grad_a = loss.grad_conj(a);
  Vector t = loss.in_conj_domain_interior(c0) ? Vector(Vector::Zero(k)) : interior_start(loss, c0, B);

  auto value = [&](const Vector& x) { return loss.conj(x) - grad_a.dot(x); };
  Vector x = c0 + B * t;
  double f = value(x);
  for (int it = 0; it < 500; ++it) {
    const Vector grad = B.transpose() * (loss.grad_conj(x) - grad_a);
    if (grad.lpNorm<Eigen::Infinity>() <= 1e-2 * tol.residual_tol) return x;
    const Matrix H = B.transpose() * loss.hess_conj(x).asDiagonal() * B;
    Eigen::LDLT<Matrix> ldlt(H);
    Vector step = ldlt.solve(-grad);
    double slope = grad.dot(step);
    if (!step.allFinite() || slope >= 0.0) {
      step = -grad;
      slope = -grad.squaredNorm();
    }
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 100; ++ls, alpha *= 0.5) {
      const Vector x_new = x + alpha * (B * step);
      if (!loss.in_conj_domain_interior(x_new)) continue;
      const double f_new = value(x_new);
      if (f_new <= f + 1e-4 * alpha * slope || std::abs(alpha * slope) < 1e-15 * (1.0 + std::abs(f))) {
        t += alpha * step;
        x = x_new;
        f = f_new;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  const Vector grad = B.transpose() * (loss.grad_conj(x) - grad_a);
  if (grad.lpNorm<Eigen::Infinity>() <= tol.residual_tol) return x;
  throw NumericalError(
      "Bregman projection: Newton's method stalled (residual " +
      std::to_string(grad.lpNorm<Eigen::Infinity>()) +
      "); the minimizer may sit on the boundary of dom(psi^*), where psi^* is not essentially smooth");
}

}  // namespace genlasso
