#include "genlasso/experiments.hpp"

#include "genlasso/errors.hpp"
#include "genlasso/lp.hpp"
#include "internal.hpp"

#include <cmath>
#include <map>

namespace genlasso {
namespace {

constexpr double kInvarianceTol = 1e-6;
constexpr std::size_t kMaxExemplars = 25;

struct TrialOutcome {
  Verdict verdict = Verdict::undetermined;
  std::vector<std::string> notes;
  std::optional<Verdict> surrogate;
  std::vector<std::string> surrogate_notes;
};

void tally(VerdictCounts& counts, Verdict v) {
  switch (v) {
    case Verdict::unique: ++counts.unique; break;
    case Verdict::non_unique: ++counts.non_unique; break;
    case Verdict::undetermined: ++counts.undetermined; break;
  }
}

Vector random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Vector u(n);
  do {
    for (int i = 0; i < n; ++i) u(i) = normal(rng);
  } while (u.norm() == 0.0);
  return u.normalized();
}

bool same_sets(const SolveResult& a, const SolveResult& b) {
  return a.boundary_set == b.boundary_set && a.boundary_signs == b.boundary_signs &&
         a.active_set == b.active_set && a.active_signs == b.active_signs;
}

SubspaceBasis x_null_subspace(const Matrix& X, const Matrix& D, const IndexSet& B,
                              const NumericTolerances& tol) {
  const Matrix U = null_space_basis(select_rows(D, complement(B, static_cast<int>(D.rows()))), tol).basis();
  if (U.cols() == 0) return SubspaceBasis::zero(static_cast<int>(X.rows()));
  return column_space_basis(restrict_to(X, U, tol), tol);
}

}  // namespace

void TrialConfig::validate() const {
  if (n < 1 || p < 1) throw InputError("trial config: n and p must be positive");
  if (trials < 1) throw InputError("trial config: trials must be at least 1");
  if (!(perturbation_eps > 0.0)) throw InputError("trial config: perturbation_eps must be positive");
  if (!std::isfinite(lambda) || lambda < 0.0) throw InputError("trial config: lambda must be >= 0");
  if (inject_duplicate_column && p < 2) throw InputError("trial config: duplicating a column needs p >= 2");
  if (graph) graph->validate();
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

MonteCarloSummary monte_carlo_uniqueness(const TrialConfig& cfg, const CertifyOptions& opts) {
  cfg.validate();
  const GraphSpec graph = cfg.graph ? *cfg.graph : path_graph(cfg.p);
  const Matrix D = build_penalty(cfg.penalty, cfg.p, &graph);
  MonteCarloSummary summary;
  summary.config = cfg;
  summary.p = static_cast<int>(D.cols());
  summary.m = static_cast<int>(D.rows());
  summary.nullity = nullity(D, opts.solver.inner.tol);
  summary.outside_theorem = summary.p > cfg.n && summary.nullity > cfg.n;
  if (cfg.inject_duplicate_column && summary.p < 2) {
    throw InputError("trial config: duplicating a column needs p >= 2");
  }

  const LossSpec loss = LossSpec::of(cfg.loss);
  const bool glm = cfg.loss != LossFamily::squared;
  std::vector<TrialOutcome> outcomes(cfg.trials);

  detail::parallel_for(cfg.trials, cfg.threads, [&](int trial) {
    std::mt19937_64 rng = substream(cfg.seed, static_cast<std::uint64_t>(trial));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    ProblemInstance inst;
    inst.X.resize(cfg.n, summary.p);
    for (int j = 0; j < summary.p; ++j) {
      for (int i = 0; i < cfg.n; ++i) inst.X(i, j) = normal(rng);
    }
    if (cfg.inject_duplicate_column) inst.X.col(summary.p - 1) = inst.X.col(0);
    inst.D = D;
    inst.lambda = cfg.lambda;
    inst.y.resize(cfg.n);

    TrialOutcome& out = outcomes[trial];
    if (!glm) {
      for (int i = 0; i < cfg.n; ++i) inst.y(i) = normal(rng);
      const UniquenessCertificate cert = certify_uniqueness(inst, loss, opts);
      out.verdict = cert.verdict;
      out.notes = cert.notes;
      return;
    }
    // Responses from the model at beta = 0, then jittered into a continuous
    // surrogate on the same design.
    Vector jitter(cfg.n);
    if (cfg.loss == LossFamily::logistic) {
      std::bernoulli_distribution coin(0.5);
      for (int i = 0; i < cfg.n; ++i) inst.y(i) = coin(rng) ? 1.0 : 0.0;
      for (int i = 0; i < cfg.n; ++i) jitter(i) = std::abs(inst.y(i) - 0.5 * unit(rng));
    } else {
      std::poisson_distribution<int> count(1.0);
      for (int i = 0; i < cfg.n; ++i) inst.y(i) = count(rng);
      for (int i = 0; i < cfg.n; ++i) jitter(i) = inst.y(i) + unit(rng);
    }
    const UniquenessCertificate cert = certify_uniqueness(inst, loss, opts);
    out.verdict = cert.verdict;
    out.notes = cert.notes;
    inst.y = jitter;
    const UniquenessCertificate scert = certify_uniqueness(inst, loss, opts);
    out.surrogate = scert.verdict;
    out.surrogate_notes = scert.notes;
  });

  if (glm) summary.surrogate_counts = VerdictCounts{};
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const TrialOutcome& out = outcomes[trial];
    tally(summary.counts, out.verdict);
    if (out.verdict != Verdict::unique && summary.exemplars.size() < kMaxExemplars) {
      summary.exemplars.push_back({trial, glm ? "model" : "gaussian", out.verdict, out.notes});
    }
    if (out.surrogate) {
      tally(*summary.surrogate_counts, *out.surrogate);
      if (*out.surrogate != Verdict::unique && summary.exemplars.size() < kMaxExemplars) {
        summary.exemplars.push_back({trial, "surrogate", *out.surrogate, out.surrogate_notes});
      }
    }
  }
  return summary;
}

StabilityReport local_stability_probe(const ProblemInstance& inst, const LossSpec& loss,
                                      double eps, int directions, std::uint64_t seed,
                                      const GlmSolveOptions& opts) {
  inst.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("stability probe: eps must be positive");
  if (directions < 1) throw InputError("stability probe: need at least one direction");
  const NumericTolerances& tol = opts.inner.tol;
  const SolveResult base = solve_glm(inst, loss, opts);

  StabilityReport report;
  report.directions = directions;
  const Matrix M = compute_M(base.active_set, base.boundary_set, inst.X, inst.D, tol);
  report.m_norm = M.size() ? M.norm() : 0.0;
  report.m_fit_norm = M.size() ? (M * base.fit).norm() : 0.0;
  report.near_exceptional =
      report.m_norm > 1e-10 &&
      report.m_fit_norm <= 1e-6 * std::max(1.0, report.m_norm * base.fit.norm());

  std::vector<Vector> dirs;
  for (int d = 0; d < directions; ++d) {
    std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(d));
    dirs.push_back(random_unit(rng, inst.n()));
  }

  // Below ~10 sign_tol the set extraction, not the geometry, decides
  // membership, so halving stops there.
  constexpr int kMaxHalvings = 10;
  report.eps_floor = 10.0 * tol.sign_tol * std::max(1.0, inst.y.norm());
  double current = eps;
  for (int level = 0;; ++level) {
    StabilityLevel lv;
    lv.eps = current;
    for (const Vector& u : dirs) {
      ProblemInstance perturbed = inst;
      perturbed.y += current * u;
      try {
        if (same_sets(base, solve_glm(perturbed, loss, opts))) ++lv.preserved;
      } catch (const NumericalError&) {
        ++lv.failures;
      }
    }
    report.levels.push_back(lv);
    report.final_eps = current;
    report.preserved_fraction = static_cast<double>(lv.preserved) / directions;
    if (lv.preserved == directions) {
      report.stable = true;
      break;
    }
    if (level == kMaxHalvings || 0.5 * current < report.eps_floor) break;
    current *= 0.5;
    ++report.halvings;
  }
  return report;
}

InvarianceReport subspace_invariance_probe(const ProblemInstance& inst, const LossSpec& loss,
                                           int runs, std::uint64_t seed,
                                           const GlmSolveOptions& opts) {
  inst.validate();
  if (runs < 1) throw InputError("invariance probe: runs must be positive");
  const NumericTolerances& tol = opts.inner.tol;
  InvarianceReport report;
  report.runs = runs;
  const SolveResult base = solve_glm(inst, loss, opts);
  report.observed.push_back({"solver", base.boundary_set, base.boundary_signs});

  for (int r = 1; r < runs; ++r) {
    std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(r));
    GlmSolveOptions jittered = opts;
    jittered.inner.rho = std::exp(std::uniform_real_distribution<double>(std::log(0.1), std::log(10.0))(rng));
    jittered.inner.init_seed = rng();
    jittered.inner.polish_interval = std::uniform_int_distribution<int>(5, 60)(rng);
    jittered.inner.adaptive_rho = std::bernoulli_distribution(0.5)(rng);
    try {
      const SolveResult res = solve_glm(inst, loss, jittered);
      report.observed.push_back({"solver", res.boundary_set, res.boundary_signs});
    } catch (const NumericalError& e) {
      report.notes.push_back(std::string("re-solve failed: ") + e.what());
    }
  }

  // Vertices of the optimal face.
  if (inst.lambda > 0.0 && inst.m() > 0) {
    const int m = inst.m();
    const Vector target = inst.D.transpose() * base.gamma;
    for (int r = 0; r < runs; ++r) {
      std::mt19937_64 rng = substream(seed ^ 0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(r));
      std::normal_distribution<double> normal;
      lp::Problem prob = lp::Problem::with_variables(m);
      for (int i = 0; i < m; ++i) prob.objective(i) = normal(rng);
      prob.eq = inst.D.transpose();
      prob.eq_rhs = target;
      prob.lower = Vector::Constant(m, -1.0);
      prob.upper = Vector::Constant(m, 1.0);
      for (std::size_t k = 0; k < base.active_set.size(); ++k) {
        prob.lower(base.active_set[k]) = prob.upper(base.active_set[k]) = base.active_signs[k];
      }
      const lp::Solution sol = lp::solve(prob);
      if (sol.status != lp::Status::optimal) {
        report.notes.push_back(std::string("vertex search: ") + lp::to_string(sol.status));
        continue;
      }
      const SignedSet b = extract_boundary(sol.x, tol);
      report.observed.push_back({"vertex", b.indices, b.signs});
    }
  }

  std::map<IndexSet, SubspaceBasis> spaces;
  for (const ObservedSubgradient& o : report.observed) {
    if (!spaces.count(o.boundary_set)) {
      spaces.emplace(o.boundary_set, x_null_subspace(inst.X, inst.D, o.boundary_set, tol));
    }
  }
  report.distinct_boundary_sets = static_cast<int>(spaces.size());
  for (auto a = spaces.begin(); a != spaces.end(); ++a) {
    for (auto b = std::next(a); b != spaces.end(); ++b) {
      report.max_distance = std::max(report.max_distance, subspace_distance(a->second, b->second));
    }
  }
  report.all_equal = report.max_distance <= kInvarianceTol;
  const SubspaceBasis active = x_null_subspace(inst.X, inst.D, base.active_set, tol);
  for (const auto& entry : spaces) {
    report.max_active_distance = std::max(report.max_active_distance, subspace_distance(active, entry.second));
  }
  report.active_equal = report.max_active_distance <= kInvarianceTol;
  if (report.distinct_boundary_sets == 1) {
    report.notes.push_back("single boundary set observed; invariance holds vacuously");
  }
  report.notes.push_back("optimal subgradients are sampled, not enumerated");
  return report;
}

Matrix compute_M(const IndexSet& A, const IndexSet& B, const Matrix& X, const Matrix& D,
                 const NumericTolerances& tol) {
  if (X.cols() != D.cols()) throw InputError("compute_M: X and D differ in columns");
  const int m = static_cast<int>(D.rows());
  IndexSet diff;
  for (int i : B) {
    if (i < 0 || i >= m) throw InputError("compute_M: index out of range");
    if (!std::binary_search(A.begin(), A.end(), i)) diff.push_back(i);
  }
  for (int i : A) {
    if (!std::binary_search(B.begin(), B.end(), i)) throw InputError("compute_M: A must be a subset of B");
  }
  const int n = static_cast<int>(X.rows());
  if (diff.empty()) return Matrix::Zero(0, n);

  const Matrix d_rest = select_rows(D, complement(B, m));
  const Matrix U = null_space_basis(d_rest, tol).basis();
  const Matrix xp_pinv = U * pseudo_inverse(restrict_to(X, U, tol), tol);
  const Matrix d_diff = select_rows(D, diff);
  const Matrix W = null_space_basis(vstack(X, d_rest), tol).basis();
  Matrix proj = Matrix::Identity(static_cast<Eigen::Index>(diff.size()), static_cast<Eigen::Index>(diff.size()));
  if (W.cols() > 0) {
    const SubspaceBasis image = column_space_basis(d_diff * W, tol);
    if (image.dim() > 0) proj -= image.projector();
  }
  return proj * d_diff * xp_pinv;
}

}  // namespace genlasso
