#include "genlasso/solver_sq.hpp"

#include "genlasso/errors.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace genlasso {
namespace detail {

ImplicitPieces implicit_pieces(const ProblemInstance& inst, const IndexSet& B,
                               const SignVector& s, const NumericTolerances& tol) {
  validate_signed_set(B, s, inst.m());
  ImplicitPieces pieces;
  const Matrix d_rest = select_rows(inst.D, complement(B, inst.m()));
  pieces.U = null_space_basis(d_rest, tol).basis();
  pieces.XU = restrict_to(inst.X, pieces.U, tol);
  pieces.pinv = pseudo_inverse(pieces.XU, tol);
  pieces.shift = Vector::Zero(inst.n());
  if (!B.empty() && inst.lambda != 0.0) {
    Vector ds = Vector::Zero(inst.p());
    for (std::size_t k = 0; k < B.size(); ++k) ds += s[k] * inst.D.row(B[k]).transpose();
    pieces.shift = inst.lambda * (pieces.pinv.transpose() * (pieces.U.transpose() * ds));
  }
  return pieces;
}

bool project_box_affine(const Matrix& M, const Vector& h, const Vector& g0, double target,
                        Vector& out) {
  if (M.cols() == 0) {
    out.resize(0);
    return h.size() == 0 || h.lpNorm<Eigen::Infinity>() <= target;
  }
  auto clip = [](const Vector& t) -> Vector { return t.cwiseMax(-1.0).cwiseMin(1.0); };
  auto phi = [&](const Vector& mu) {
    const Vector t = g0 + M.transpose() * mu;
    return 0.5 * t.squaredNorm() - 0.5 * (t - clip(t)).squaredNorm() - mu.dot(h);
  };
  // Keep going past `target` while progress is cheap; accept on `target`.
  const double tight = 1e-15 * (1.0 + h.lpNorm<Eigen::Infinity>() + M.cwiseAbs().sum());
  const double reg = 1e-11 * (1.0 + M.squaredNorm());
  Vector mu = Vector::Zero(M.rows());
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const Vector t = g0 + M.transpose() * mu;
    const Vector c = clip(t);
    const Vector res = M * c - h;
    const double res_norm = res.lpNorm<Eigen::Infinity>();
    if (res_norm < best) {
      best = res_norm;
      out = c;
    }
    if (res_norm <= tight) break;
    Vector free = (t.array().abs() < 1.0).cast<double>();
    Matrix H = M * free.asDiagonal() * M.transpose();
    H.diagonal().array() += reg;
    Vector step = H.ldlt().solve(-res);
    double slope = res.dot(step);
    if (!step.allFinite() || slope >= 0.0) {
      step = -res;
      slope = -res.squaredNorm();
    }
    const double phi0 = phi(mu);
    double alpha = 1.0;
    int halvings = 0;
    while (phi(mu + alpha * step) > phi0 + 1e-4 * alpha * slope && halvings < 80) {
      alpha *= 0.5;
      ++halvings;
    }
    if (halvings == 80) break;
    mu += alpha * step;
  }
  return best <= target;
}

bool recover_gamma(const Matrix& D, const IndexSet& A, const SignVector& r, const Vector& score,
                   double lambda, const Vector& gamma_hint, const NumericTolerances& tol,
                   Vector& gamma) {
  const int m = static_cast<int>(D.rows());
  const IndexSet F = complement(A, m);
  Vector h = score / lambda;
  gamma = Vector::Zero(m);
  for (std::size_t k = 0; k < A.size(); ++k) {
    gamma(A[k]) = r[k];
    h -= r[k] * D.row(A[k]).transpose();
  }
  const Matrix M = select_rows(D, F).transpose();
  const double target = 0.5 * tol.residual_tol / lambda;
  Vector gamma_f;
  if (!project_box_affine(M, h, select(gamma_hint, F), target, gamma_f)) return false;
  for (std::size_t k = 0; k < F.size(); ++k) gamma(F[k]) = gamma_f(static_cast<Eigen::Index>(k));
  return true;
}

Vector trivial_gamma(const Matrix& D, const Vector& beta, const NumericTolerances& tol) {
  Vector gamma = Vector::Zero(D.rows());
  const SignedSet active = extract_active(D, beta, tol);
  for (std::size_t k = 0; k < active.indices.size(); ++k) gamma(active.indices[k]) = active.signs[k];
  return gamma;
}

SolveResult assemble_result(const ProblemInstance& inst, const LossSpec& loss, Vector beta,
                            Vector gamma, const NumericTolerances& tol) {
  SolveResult out;
  out.loss = loss.family;
  out.fit = inst.X * beta;
  out.dual_v = inst.y - loss.grad_psi(out.fit);
  const Vector score = inst.X.transpose() * out.dual_v;
  out.kkt = evaluate_kkt(score, inst.D, beta, gamma, inst.lambda, tol);
  const double penalty = inst.m() ? (inst.D * beta).lpNorm<1>() : 0.0;
  out.objective = loss.loss(out.fit, inst.y) + inst.lambda * penalty;
  if (loss.family == LossFamily::squared) out.objective += 0.5 * inst.y.squaredNorm();
  out.duality_gap = inst.lambda * penalty - score.dot(beta);
  out.dual_u = inst.lambda * gamma;

  const SignedSet boundary = extract_boundary(gamma, tol);
  const SignedSet active = extract_active(inst.D, beta, tol);
  out.boundary_set = boundary.indices;
  out.boundary_signs = boundary.signs;
  out.active_set = active.indices;
  out.active_signs = active.signs;

  if (inst.lambda == 0.0 || inst.m() == 0) {
    out.flagged_non_unique = rank(inst.X, tol) < inst.p();
  } else {
    out.flagged_non_unique = rank(vstack(inst.X, inst.D), tol) < inst.p();
  }
  out.beta = std::move(beta);
  out.gamma = std::move(gamma);
  return out;
}

SolveResult solve_unpenalized_squared(const ProblemInstance& inst, const NumericTolerances& tol) {
  Vector beta = pseudo_inverse(inst.X, tol) * inst.y;
  Vector gamma = trivial_gamma(inst.D, beta, tol);
  return assemble_result(inst, LossSpec::squared(), std::move(beta), std::move(gamma), tol);
}

namespace {

double soft(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

// Equality-constrained refinement on a guessed active set: minimize the
// criterion over {D_{-A} beta = 0} with the penalty linearized as
// lambda r^T D_A beta, then look for a matching subgradient.
bool polish(const ProblemInstance& inst, const IndexSet& A, const SignVector& r,
            const Vector& beta_hint, const Vector& gamma_hint, const NumericTolerances& tol,
            SolveResult& out) {
  const Matrix U = null_space_basis(select_rows(inst.D, complement(A, inst.m())), tol).basis();
  const Matrix XU = restrict_to(inst.X, U, tol);
  Vector q = Vector::Zero(U.cols());
  for (std::size_t k = 0; k < A.size(); ++k) {
    q += inst.lambda * r[k] * (U.transpose() * inst.D.row(A[k]).transpose());
  }
  // Linear term must be orthogonal to null(XU), else the restricted problem
  // is unbounded and A is wrong.
  const Matrix N = null_space_basis(XU, tol).basis();
  if (N.cols() > 0 && (N.transpose() * q).norm() > 1e-9 * (1.0 + q.norm())) return false;

  const Matrix gram_pinv = pseudo_inverse(XU.transpose() * XU, tol);
  Vector a = pseudo_inverse(XU, tol) * inst.y - gram_pinv * q;
  if (N.cols() > 0) {
    const Vector a_hint = U.transpose() * beta_hint;
    a += N * (N.transpose() * (a_hint - a));
  }
  Vector beta = U * a;

  const Vector d_beta = inst.D * beta;
  const double threshold =
      tol.sign_tol * std::max(1.0, d_beta.size() ? d_beta.lpNorm<Eigen::Infinity>() : 0.0);
  for (std::size_t k = 0; k < A.size(); ++k) {
    if (r[k] * d_beta(A[k]) < -threshold) return false;
  }

  const Vector score = inst.X.transpose() * (inst.y - inst.X * beta);
  Vector gamma;
  if (!recover_gamma(inst.D, A, r, score, inst.lambda, gamma_hint, tol, gamma)) return false;

  SolveResult candidate =
      assemble_result(inst, LossSpec::squared(), std::move(beta), std::move(gamma), tol);
  if (!candidate.kkt.feasible) return false;
  const double primal = candidate.objective;
  if (std::abs(candidate.duality_gap) > 1e-10 * (1.0 + std::abs(primal))) return false;
  out = std::move(candidate);
  return true;
}

}  // namespace

SolveResult solve_squared(const ProblemInstance& inst, const SolveOptions& opts,
                          const Vector* beta0, const Vector* gamma0) {
  inst.validate();
  opts.tol.validate();
  if (!(opts.rho > 0.0) || !std::isfinite(opts.rho)) throw InputError("rho must be positive");
  if (opts.max_iterations < 1 || opts.polish_interval < 1) {
    throw InputError("max_iterations and polish_interval must be positive");
  }
  if (inst.lambda == 0.0 || inst.m() == 0) return solve_unpenalized_squared(inst, opts.tol);

  const int p = inst.p();
  const int m = inst.m();
  const double lambda = inst.lambda;
  const Matrix& X = inst.X;
  const Matrix& D = inst.D;
  const Matrix XtX = X.transpose() * X;
  const Matrix DtD = D.transpose() * D;
  const Vector Xty = X.transpose() * inst.y;

  double rho = opts.rho;
  Vector beta = Vector::Zero(p);
  Vector z = Vector::Zero(m);
  Vector w = Vector::Zero(m);
  if (beta0 != nullptr) {
    beta = *beta0;
    z = D * beta;
  }
  if (gamma0 != nullptr) w = (lambda / rho) * gamma0->cwiseMax(-1.0).cwiseMin(1.0);
  if (beta0 == nullptr && gamma0 == nullptr && opts.init_seed) {
    std::mt19937_64 rng(*opts.init_seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double scale = 1.0 + inst.y.lpNorm<Eigen::Infinity>();
    for (int i = 0; i < m; ++i) z(i) = scale * normal(rng);
    for (int i = 0; i < m; ++i) w(i) = (lambda / rho) * unit(rng);
  }

  const double prox =
      1e-8 * std::max(1.0, std::max(XtX.diagonal().maxCoeff(), DtD.diagonal().maxCoeff()));
  auto factorize = [&](double r) {
    Matrix K = XtX + r * DtD;
    K.diagonal().array() += prox;
    return Eigen::LLT<Matrix>(K);
  };
  Eigen::LLT<Matrix> llt = factorize(rho);

  IndexSet last_failed;
  SignVector last_failed_signs;
  int failed_repeats = 0;
  double r_prim = 0.0;
  double r_dual = 0.0;
  SolveResult result;

  for (int k = 1; k <= opts.max_iterations; ++k) {
    const Vector rhs = Xty + rho * (D.transpose() * (z - w)) + prox * beta;
    beta = llt.solve(rhs);
    const Vector d_beta = D * beta;
    const Vector z_old = z;
    const Vector shifted = d_beta + w;
    for (int i = 0; i < m; ++i) z(i) = soft(shifted(i), lambda / rho);
    w += d_beta - z;
    r_prim = (d_beta - z).norm();
    r_dual = rho * (D.transpose() * (z - z_old)).norm();

    if (k % opts.polish_interval == 0) {
      IndexSet A;
      SignVector r;
      for (int i = 0; i < m; ++i) {
        if (z(i) != 0.0) {
          A.push_back(i);
          r.push_back(z(i) > 0.0 ? 1 : -1);
        }
      }
      const bool repeat = (A == last_failed && r == last_failed_signs);
      if (!repeat || ++failed_repeats % 8 == 0) {
        const Vector gamma_hint = (rho / lambda) * w;
        if (polish(inst, A, r, beta, gamma_hint.cwiseMax(-1.0).cwiseMin(1.0), opts.tol, result)) {
          result.iterations = k;
          return result;
        }
        if (!repeat) failed_repeats = 0;
        last_failed = std::move(A);
        last_failed_signs = std::move(r);
      }
    }

    if (opts.adaptive_rho && k % 25 == 0) {
      double factor = 1.0;
      if (r_prim > 10.0 * r_dual) factor = 2.0;
      if (r_dual > 10.0 * r_prim) factor = 0.5;
      if (factor != 1.0 && rho * factor > 1e-6 && rho * factor < 1e6) {
        rho *= factor;
        w /= factor;
        llt = factorize(rho);
      }
    }
  }
  throw ConvergenceError("generalized lasso solver did not converge within " +
                             std::to_string(opts.max_iterations) + " iterations",
                         r_prim, r_dual, opts.max_iterations);
}

}  // namespace detail

SolveResult solve(const ProblemInstance& inst, const SolveOptions& opts) {
  return detail::solve_squared(inst, opts, nullptr, nullptr);
}

KktReport kkt_check(const ProblemInstance& inst, const Vector& beta, const Vector& gamma,
                    const NumericTolerances& tol) {
  inst.validate();
  if (beta.size() != inst.p() || gamma.size() != inst.m()) {
    throw InputError("kkt_check: beta/gamma dimensions do not match the instance");
  }
  const Vector score = inst.X.transpose() * (inst.y - inst.X * beta);
  return evaluate_kkt(score, inst.D, beta, gamma, inst.lambda, tol);
}

double objective(const ProblemInstance& inst, const Vector& beta) {
  const double penalty = inst.m() ? (inst.D * beta).lpNorm<1>() : 0.0;
  return 0.5 * (inst.y - inst.X * beta).squaredNorm() + inst.lambda * penalty;
}

Vector fit_from_boundary(const ProblemInstance& inst, const IndexSet& B, const SignVector& s,
                         const NumericTolerances& tol) {
  inst.validate();
  const detail::ImplicitPieces pc = detail::implicit_pieces(inst, B, s, tol);
  return pc.XU * (pc.pinv * (inst.y - pc.shift));
}

Vector solution_from_boundary(const ProblemInstance& inst, const IndexSet& B,
                              const SignVector& s, const NumericTolerances& tol) {
  inst.validate();
  const detail::ImplicitPieces pc = detail::implicit_pieces(inst, B, s, tol);
  return pc.U * (pc.pinv * (inst.y - pc.shift));
}

bool sign_feasibility(const ProblemInstance& inst, const IndexSet& B, const SignVector& s,
                      const Vector& b, const NumericTolerances& tol) {
  inst.validate();
  validate_signed_set(B, s, inst.m());
  if (b.size() != inst.p()) throw InputError("sign_feasibility: b has the wrong length");
  const Matrix d_rest = select_rows(inst.D, complement(B, inst.m()));
  const double scale = std::max(1.0, b.norm());
  const double x_scale = std::max(1.0, inst.X.norm());
  const double d_scale = std::max(1.0, d_rest.size() ? d_rest.norm() : 0.0);
  if ((inst.X * b).norm() > tol.residual_tol * scale * x_scale ||
      (d_rest.rows() && (d_rest * b).norm() > tol.residual_tol * scale * d_scale)) {
    throw InputError("sign_feasibility: b is not in null(X) cap null(D_{-B})");
  }
  const Vector beta = solution_from_boundary(inst, B, s, tol) + b;
  for (std::size_t k = 0; k < B.size(); ++k) {
    if (s[k] * inst.D.row(B[k]).dot(beta) < -tol.sign_tol) return false;
  }
  return true;
}

ProblemInstance center_problem(const ProblemInstance& inst) {
  inst.validate();
  ProblemInstance out = inst;
  out.X = inst.X.rowwise() - inst.X.colwise().mean();
  return out;
}

ProblemInstance scale_problem(const ProblemInstance& inst) {
  inst.validate();
  ProblemInstance out = inst;
  for (Eigen::Index j = 0; j < inst.X.cols(); ++j) {
    const double norm = inst.X.col(j).norm();
    if (norm == 0.0) throw InputError("cannot scale: column " + std::to_string(j) + " of X is zero");
    out.X.col(j) /= norm;
  }
  return out;
}

ProblemInstance standardize_problem(const ProblemInstance& inst) {
  ProblemInstance out = center_problem(inst);
  for (Eigen::Index j = 0; j < inst.X.cols(); ++j) {
    // A constant column centers to round-off, not to an exact zero.
    if (out.X.col(j).norm() <= 1e-12 * inst.X.col(j).norm()) {
      throw InputError("cannot standardize: column " + std::to_string(j) + " of X is constant");
    }
  }
  return scale_problem(out);
}

}  // namespace genlasso
