#include "genlasso/certify.hpp"

#include "genlasso/errors.hpp"
#include "genlasso/lp.hpp"
#include "genlasso/solver_sq.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace genlasso {
namespace {

double penalty_value(const ProblemInstance& inst, const Vector& beta) {
  return inst.m() ? (inst.D * beta).lpNorm<1>() : 0.0;
}

// Coefficients c != 0 with G c >= 0, or nothing if only c = 0 qualifies.
std::optional<Vector> semipositive_direction(const Matrix& G, const NumericTolerances& tol) {
  const Eigen::Index w = G.cols();
  if (G.rows() == 0) return Vector(Vector::Unit(w, 0));
  const SubspaceBasis kernel = null_space_basis(G, tol);
  if (kernel.dim() > 0) return Vector(kernel.basis().col(0));
  lp::Problem prob = lp::Problem::with_variables(static_cast<int>(w));
  prob.objective = -G.colwise().sum().transpose();
  prob.lower = Vector::Constant(w, -1.0);
  prob.upper = Vector::Constant(w, 1.0);
  prob.le = -G;
  prob.le_rhs = Vector::Zero(G.rows());
  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::optimal) return std::nullopt;
  if (-sol.objective <= 1e-9 * std::max(1.0, G.cwiseAbs().maxCoeff())) return std::nullopt;
  return sol.x;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::unique: return "unique";
    case Verdict::non_unique: return "non_unique";
    case Verdict::undetermined: return "undetermined";
  }
  return "unknown";
}

NullIntersection null_intersection_trivial(const Matrix& X, const Matrix& D,
                                           const NumericTolerances& tol) {
  if (X.cols() != D.cols()) throw InputError("null_intersection_trivial: X and D differ in columns");
  const int p = static_cast<int>(X.cols());
  const int deficiency = p - rank(vstack(X, D), tol);
  return {deficiency == 0, deficiency};
}

Cond1Check check_cond1(const ProblemInstance& inst, const SolveResult& result,
                       const NumericTolerances& tol) {
  const Matrix d_rest = select_rows(inst.D, complement(result.boundary_set, inst.m()));
  const SubspaceBasis U = null_space_basis(d_rest, tol);
  Cond1Check out;
  out.k = U.dim();
  out.rank = out.k ? rank(restrict_to(inst.X, U.basis(), tol), tol) : 0;
  out.holds = out.rank == out.k;
  return out;
}

std::optional<Witness> nonuniqueness_witness(const ProblemInstance& inst, const SolveResult& result,
                                             const LossSpec& loss, const NumericTolerances& tol) {
  inst.validate();
  const int m = inst.m();
  const bool unpenalized = inst.lambda == 0.0 || m == 0;
  const Matrix constraint =
      unpenalized ? inst.X : vstack(inst.X, select_rows(inst.D, complement(result.boundary_set, m)));
  const SubspaceBasis W = null_space_basis(constraint, tol);
  if (W.dim() == 0) return std::nullopt;

  Vector b;
  if (unpenalized) {
    b = W.basis().col(0);
  } else {
    // Boundary rows where D beta vanishes must keep the sign of gamma.
    IndexSet inactive;
    SignVector inactive_signs;
    for (std::size_t k = 0; k < result.boundary_set.size(); ++k) {
      const int i = result.boundary_set[k];
      if (!std::binary_search(result.active_set.begin(), result.active_set.end(), i)) {
        inactive.push_back(i);
        inactive_signs.push_back(result.boundary_signs[k]);
      }
    }
    Matrix G = select_rows(inst.D, inactive) * W.basis();
    for (std::size_t k = 0; k < inactive.size(); ++k) G.row(static_cast<Eigen::Index>(k)) *= inactive_signs[k];
    const std::optional<Vector> c = semipositive_direction(G, tol);
    if (!c) return std::nullopt;
    b = W.basis() * *c;
  }
  b.normalize();

  double step = std::numeric_limits<double>::infinity();
  if (!unpenalized) {
    const Vector d_beta = inst.D * result.beta;
    const Vector d_b = inst.D * b;
    const double floor = 1e-9 * std::max(1.0, d_b.lpNorm<Eigen::Infinity>());
    for (std::size_t k = 0; k < result.boundary_set.size(); ++k) {
      const int i = result.boundary_set[k];
      const double rate = result.boundary_signs[k] * d_b(i);
      if (rate < -floor) {
        step = std::min(step, std::max(result.boundary_signs[k] * d_beta(i), 0.0) / -rate);
      }
    }
  }
  step = std::isfinite(step) ? 0.5 * step : std::max(1.0, result.beta.norm());
  if (!(step > 0.0)) return std::nullopt;

  Witness w;
  w.direction = b;
  w.step = step;
  w.beta2 = result.beta + step * b;
  w.gamma2 = unpenalized ? detail::trivial_gamma(inst.D, w.beta2, tol) : result.gamma;
  const KktReport kkt = kkt_check_glm(inst, loss, w.beta2, w.gamma2, tol);
  w.fit_discrepancy = (inst.X * w.beta2 - result.fit).lpNorm<Eigen::Infinity>();
  const double pen1 = penalty_value(inst, result.beta);
  w.penalty_discrepancy = std::abs(penalty_value(inst, w.beta2) - pen1);
  const double fit_scale = 1.0 + result.fit.lpNorm<Eigen::Infinity>();
  if (!kkt.feasible || w.fit_discrepancy > 1e-8 * fit_scale) return std::nullopt;
  if (!unpenalized && w.penalty_discrepancy > 1e-8 * (1.0 + pen1)) return std::nullopt;
  return w;
}

UniquenessCertificate certify_result(const ProblemInstance& inst, const LossSpec& loss,
                                     const SolveResult& result, const CertifyOptions& opts) {
  inst.validate();
  const NumericTolerances& tol = opts.solver.inner.tol;
  UniquenessCertificate cert;
  cert.loss = loss.family;
  cert.boundary_set_used = result.boundary_set;
  cert.boundary_signs_used = result.boundary_signs;
  cert.solution = result;
  cert.null_intersection_dim = null_intersection_trivial(inst.X, inst.D, tol).dim;

  if (!result.kkt.feasible) {
    cert.notes.push_back("the supplied solution is not KKT-feasible; nothing can be certified");
    return cert;
  }

  const bool unpenalized = inst.lambda == 0.0 || inst.m() == 0;
  bool holds = false;
  if (unpenalized) {
    cert.rank_xu = rank(inst.X, tol);
    cert.k_b = inst.p();
    holds = cert.rank_xu == cert.k_b;
    cert.notes.push_back("unpenalized problem: unique iff X has full column rank");
  } else {
    const Cond1Check c1 = check_cond1(inst, result, tol);
    cert.rank_xu = c1.rank;
    cert.k_b = c1.k;
    holds = c1.holds && cert.null_intersection_dim == 0;
  }

  if (holds) {
    if (unpenalized) {
      cert.verdict = Verdict::unique;
      return cert;
    }
    try {
      const Vector implicit =
          loss.family == LossFamily::squared
              ? solution_from_boundary(inst, result.boundary_set, result.boundary_signs, tol)
              : solution_from_boundary_glm(inst, loss, result.boundary_set, result.boundary_signs, tol);
      const double gap = (implicit - result.beta).lpNorm<Eigen::Infinity>();
      if (gap <= opts.cross_check_tol * (1.0 + result.beta.lpNorm<Eigen::Infinity>())) {
        cert.verdict = Verdict::unique;
      } else {
        cert.notes.push_back("rank condition holds but the implicit-form solution differs from the solver by " +
                             std::to_string(gap));
      }
    } catch (const NumericalError& e) {
      cert.notes.push_back(std::string("implicit-form cross-check failed: ") + e.what());
    }
    return cert;
  }

  cert.witness = nonuniqueness_witness(inst, result, loss, tol);
  if (cert.witness) {
    cert.verdict = Verdict::non_unique;
  } else {
    cert.notes.push_back(
        "rank condition fails but no sign-feasible direction was verified; the computed boundary set may be "
        "numerically ambiguous");
  }
  return cert;
}

UniquenessCertificate certify_uniqueness(const ProblemInstance& inst, const LossSpec& loss,
                                         const CertifyOptions& opts) {
  inst.validate();
  std::optional<ExistenceReport> existence;
  if (loss.family != LossFamily::squared) {
    existence = existence_check(inst, loss, opts.solver.inner.tol);
    if (existence->exists == ExistenceStatus::violated) {
      UniquenessCertificate cert;
      cert.loss = loss.family;
      cert.existence = existence;
      cert.null_intersection_dim = null_intersection_trivial(inst.X, inst.D, opts.solver.inner.tol).dim;
      cert.notes.push_back("existence condition violated (" + std::string(to_string(existence->condition_checked)) +
                           "): " + existence->detail);
      return cert;
    }
  }
  try {
    const SolveResult result = solve_glm(inst, loss, opts.solver);
    UniquenessCertificate cert = certify_result(inst, loss, result, opts);
    cert.existence = existence;
    return cert;
  } catch (const NumericalError& e) {
    UniquenessCertificate cert;
    cert.loss = loss.family;
    cert.existence = existence;
    cert.null_intersection_dim = null_intersection_trivial(inst.X, inst.D, opts.solver.inner.tol).dim;
    cert.notes.push_back(std::string("solver failed: ") + e.what());
    return cert;
  }
}

}  // namespace genlasso
