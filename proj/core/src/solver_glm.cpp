#include "genlasso/solver_glm.hpp"

#include "genlasso/bregman.hpp"
#include "genlasso/errors.hpp"
#include "genlasso/existence.hpp"
#include "internal.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace genlasso {
namespace {

double smooth_part(const LossSpec& loss, const ProblemInstance& inst, const Vector& beta) {
  return loss.loss(inst.X * beta, inst.y);
}

double criterion(const LossSpec& loss, const ProblemInstance& inst, const Vector& beta) {
  const double penalty = inst.m() ? (inst.D * beta).lpNorm<1>() : 0.0;
  return smooth_part(loss, inst, beta) + inst.lambda * penalty;
}

void check_divergence(const Vector& fit, double bound) {
  const double norm = fit.lpNorm<Eigen::Infinity>();
  if (norm > bound) {
    throw NoSolutionError(
        "fit norm " + std::to_string(norm) + " exceeded " + std::to_string(bound) +
            "; the criterion appears not to attain its infimum (check existence)",
        norm);
  }
}

// A recession direction b in null(D) with X b != 0 along which the loss never
// increases rules out a minimizer. For binary logistic and Poisson responses
// the unpenalized existence LPs on X U, U a basis of null(D), detect exactly
// those directions.
void require_no_free_recession(const ProblemInstance& inst, const LossSpec& loss,
                               const NumericTolerances& tol) {
  const bool exact = loss.family == LossFamily::poisson ||
                     (loss.family == LossFamily::logistic &&
                      (inst.y.array() == 0.0 || inst.y.array() == 1.0).all());
  if (!exact) return;
  const Matrix U = inst.m() && inst.lambda > 0.0 ? null_space_basis(inst.D, tol).basis()
                            : Matrix(Matrix::Identity(inst.p(), inst.p()));
  if (U.cols() == 0) return;
  ProblemInstance reduced;
  reduced.X = restrict_to(inst.X, U, tol);
  reduced.D = Matrix::Identity(U.cols(), U.cols());
  reduced.y = inst.y;
  reduced.lambda = 0.0;
  const ExistenceReport r = existence_check(reduced, loss, tol);
  if (r.exists == ExistenceStatus::violated) {
    throw NoSolutionError("no solution attained: " + r.detail +
                              " along an unpenalized direction; the criterion does not attain its"
                              " infimum (check existence)",
                          std::numeric_limits<double>::infinity());
  }
}

SolveResult newton_unpenalized(const ProblemInstance& inst, const LossSpec& loss,
                               const GlmSolveOptions& opts) {
  const NumericTolerances& tol = opts.inner.tol;
  Vector beta = Vector::Zero(inst.p());
  for (int it = 1; it <= opts.max_newton_iterations; ++it) {
    const Vector fit = inst.X * beta;
    check_divergence(fit, opts.max_fit_norm);
    const Vector score = inst.X.transpose() * (inst.y - loss.grad_psi(fit));
    if (score.lpNorm<Eigen::Infinity>() <= 0.1 * tol.residual_tol) {
      Vector gamma = detail::trivial_gamma(inst.D, beta, tol);
      SolveResult out = detail::assemble_result(inst, loss, std::move(beta), std::move(gamma), tol);
      out.iterations = it - 1;
      return out;
    }
    const Matrix H = inst.X.transpose() * loss.hess_psi(fit).asDiagonal() * inst.X;
    Vector step = pseudo_inverse(H, tol) * score;
    double slope = -score.dot(step);
    if (!(slope < 0.0)) {
      step = score;
      slope = -score.squaredNorm();
    }
    const double f0 = smooth_part(loss, inst, beta);
    double alpha = 1.0;
    if (-slope > 1e-12 * (1.0 + std::abs(f0))) {
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        if (smooth_part(loss, inst, beta + alpha * step) <= f0 + 1e-4 * alpha * slope) break;
      }
    }
    beta += alpha * step;
  }
  const Vector score = inst.X.transpose() * (inst.y - loss.grad_psi(inst.X * beta));
  throw ConvergenceError("unpenalized GLM Newton iteration did not converge",
                         score.lpNorm<Eigen::Infinity>(), 0.0, opts.max_newton_iterations);
}

// Exact minimizer over the face {D_{-A} beta = 0} with the penalty
// linearized as lambda r^T D_A beta (Newton on the face coordinates), followed
// by subgradient recovery. Succeeds only if the result passes the KKT check.
bool face_polish(const ProblemInstance& inst, const LossSpec& loss, const IndexSet& A,
                 const SignVector& r, const Vector& beta_start, const Vector& gamma_hint,
                 const GlmSolveOptions& opts, SolveResult& out) {
  const NumericTolerances& tol = opts.inner.tol;
  const Matrix U = null_space_basis(select_rows(inst.D, complement(A, inst.m())), tol).basis();
  const Matrix XU = restrict_to(inst.X, U, tol);
  Vector q = Vector::Zero(U.cols());
  for (std::size_t k = 0; k < A.size(); ++k) {
    q += inst.lambda * r[k] * (U.transpose() * inst.D.row(A[k]).transpose());
  }
  const Matrix N = null_space_basis(XU, tol).basis();
  if (N.cols() > 0 && (N.transpose() * q).norm() > 1e-9 * (1.0 + q.norm())) return false;

  auto value = [&](const Vector& a) { return loss.loss(XU * a, inst.y) + q.dot(a); };
  Vector a = U.transpose() * beta_start;
  for (int it = 0; it < 50; ++it) {
    const Vector z = XU * a;
    if (z.lpNorm<Eigen::Infinity>() > opts.max_fit_norm) return false;
    const Vector grad = XU.transpose() * (loss.grad_psi(z) - inst.y) + q;
    if (grad.lpNorm<Eigen::Infinity>() <= 1e-13 * (1.0 + q.lpNorm<Eigen::Infinity>())) break;
    const Matrix H = XU.transpose() * loss.hess_psi(z).asDiagonal() * XU;
    const Vector step = -(pseudo_inverse(H, tol) * grad);
    const double slope = grad.dot(step);
    if (!(slope < 0.0)) break;
    const double f0 = value(a);
    double alpha = 1.0;
    // Below the roundoff floor of f the local Newton step is taken as is.
    if (-slope > 1e-12 * (1.0 + std::abs(f0))) {
      int ls = 0;
      for (; ls < 60; ++ls, alpha *= 0.5) {
        if (value(a + alpha * step) <= f0 + 1e-4 * alpha * slope) break;
      }
      if (ls == 60) break;
    }
    a += alpha * step;
  }
  Vector beta = U * a;

  const Vector d_beta = inst.D * beta;
  const double threshold =
      tol.sign_tol * std::max(1.0, d_beta.size() ? d_beta.lpNorm<Eigen::Infinity>() : 0.0);
  for (std::size_t k = 0; k < A.size(); ++k) {
    if (r[k] * d_beta(A[k]) < -threshold) return false;
  }
  const Vector score = inst.X.transpose() * (inst.y - loss.grad_psi(inst.X * beta));
  Vector gamma;
  if (!detail::recover_gamma(inst.D, A, r, score, inst.lambda, gamma_hint, tol, gamma)) return false;
  SolveResult candidate = detail::assemble_result(inst, loss, std::move(beta), std::move(gamma), tol);
  if (!candidate.kkt.feasible) return false;
  out = std::move(candidate);
  return true;
}

SignedSet support(const Matrix& D, const Vector& beta, double relative) {
  SignedSet out;
  const Vector d_beta = D * beta;
  if (d_beta.size() == 0) return out;
  const double threshold = relative * std::max(1.0, d_beta.lpNorm<Eigen::Infinity>());
  for (Eigen::Index i = 0; i < d_beta.size(); ++i) {
    if (std::abs(d_beta(i)) > threshold) {
      out.indices.push_back(static_cast<int>(i));
      out.signs.push_back(d_beta(i) > 0.0 ? 1 : -1);
    }
  }
  return out;
}

}  // namespace

KktReport kkt_check_glm(const ProblemInstance& inst, const LossSpec& loss, const Vector& beta,
                        const Vector& gamma, const NumericTolerances& tol) {
  inst.validate();
  if (beta.size() != inst.p() || gamma.size() != inst.m()) {
    throw InputError("kkt_check_glm: beta/gamma dimensions do not match the instance");
  }
  const Vector score = inst.X.transpose() * (inst.y - loss.grad_psi(inst.X * beta));
  return evaluate_kkt(score, inst.D, beta, gamma, inst.lambda, tol);
}

SolveResult solve_glm(const ProblemInstance& inst, const LossSpec& loss,
                      const GlmSolveOptions& opts) {
  inst.validate();
  opts.inner.tol.validate();
  if (loss.family == LossFamily::squared) return solve(inst, opts.inner);
  if (!(opts.max_fit_norm > 0.0) || opts.max_newton_iterations < 1) {
    throw InputError("max_fit_norm and max_newton_iterations must be positive");
  }
  require_no_free_recession(inst, loss, opts.inner.tol);
  if (inst.lambda == 0.0 || inst.m() == 0) return newton_unpenalized(inst, loss, opts);

  const NumericTolerances& tol = opts.inner.tol;
  const double lambda = inst.lambda;
  Vector beta = Vector::Zero(inst.p());
  Vector gamma_hint = Vector::Zero(inst.m());
  double last_step = 0.0;

  for (int it = 1; it <= opts.max_newton_iterations; ++it) {
    const Vector fit = inst.X * beta;
    check_divergence(fit, opts.max_fit_norm);
    const Vector mu = loss.grad_psi(fit);
    const Vector w = loss.hess_psi(fit).cwiseMax(1e-12);
    const Vector sw = w.cwiseSqrt();

    // Quadratic model of the smooth part at beta, written as a weighted
    // least-squares generalized lasso.
    ProblemInstance sub;
    sub.X = sw.asDiagonal() * inst.X;
    sub.y = sw.cwiseProduct(fit) + (inst.y - mu).cwiseQuotient(sw);
    sub.D = inst.D;
    sub.lambda = lambda;
    const SolveResult inner = detail::solve_squared(sub, opts.inner, &beta, &gamma_hint);
    gamma_hint = inner.gamma;

    const Vector d = inner.beta - beta;
    const double f0 = criterion(loss, inst, beta);
    const double decrease = (mu - inst.y).dot(inst.X * d) +
                            lambda * ((inst.D * inner.beta).lpNorm<1>() - (inst.D * beta).lpNorm<1>());
    double alpha = 1.0;
    for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
      const Vector trial = beta + alpha * d;
      if ((inst.X * trial).lpNorm<Eigen::Infinity>() > 2.0 * opts.max_fit_norm) continue;
      if (criterion(loss, inst, trial) <= f0 + 1e-4 * alpha * std::min(decrease, 0.0)) break;
    }
    beta += alpha * d;
    last_step = alpha * d.norm();

    const SignedSet active = extract_active(inst.D, beta, tol);
    const Vector score = inst.X.transpose() * (inst.y - loss.grad_psi(inst.X * beta));
    Vector gamma;
    if (detail::recover_gamma(inst.D, active.indices, active.signs, score, lambda, gamma_hint, tol,
                              gamma)) {
      const KktReport kkt = evaluate_kkt(score, inst.D, beta, gamma, lambda, tol);
      if (kkt.feasible) {
        SolveResult out = detail::assemble_result(inst, loss, beta, std::move(gamma), tol);
        out.iterations = it;
        return out;
      }
    }
    if (last_step <= 1e-6 * (1.0 + beta.norm())) {
      const SignedSet candidates[] = {active, support(inst.D, beta, 1e-12),
                                      SignedSet{inner.active_set, inner.active_signs}};
      for (const SignedSet& cand : candidates) {
        SolveResult out;
        if (face_polish(inst, loss, cand.indices, cand.signs, beta, gamma_hint, opts, out)) {
          out.iterations = it;
          return out;
        }
      }
    }
  }
  throw ConvergenceError("proximal Newton iteration did not converge", last_step, 0.0,
                         opts.max_newton_iterations);
}

Vector fit_from_boundary_glm(const ProblemInstance& inst, const LossSpec& loss,
                             const IndexSet& B, const SignVector& s,
                             const NumericTolerances& tol) {
  inst.validate();
  const detail::ImplicitPieces pc = detail::implicit_pieces(inst, B, s, tol);
  const Vector c = inst.y - pc.shift;
  const SubspaceBasis L = null_space_basis(pc.XU.transpose(), tol);
  const Vector a = loss.grad_psi(Vector::Zero(inst.n()));
  return loss.grad_conj(bregman_project_affine(loss, c, L, a, tol));
}

Vector solution_from_boundary_glm(const ProblemInstance& inst, const LossSpec& loss,
                                  const IndexSet& B, const SignVector& s,
                                  const NumericTolerances& tol) {
  const Vector fit = fit_from_boundary_glm(inst, loss, B, s, tol);
  const detail::ImplicitPieces pc = detail::implicit_pieces(inst, B, s, tol);
  return pc.U * (pc.pinv * fit);
}

}  // namespace genlasso
