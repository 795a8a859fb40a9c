#pragma once

// Desk-scale empirical checks: Monte Carlo uniqueness under Gaussian designs,
// local stability of (B, s, A, r), invariance of X null(D_{-B}) across optimal
// subgradients, and the matrix M_{A,B} that marks the exceptional responses.

#include "genlasso/certify.hpp"
#include "genlasso/penalty.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace genlasso {

struct TrialConfig {
  int n = 5;
  /// Ignored for "ktf:N,d,k", which fixes p = N^d.
  int p = 10;
  /// Penalty builder spec, as accepted by build_penalty.
  std::string penalty = "identity";
  /// Graph for "graph"/"gtf:k"; a path on p nodes when absent.
  std::optional<GraphSpec> graph;
  LossFamily loss = LossFamily::squared;
  double lambda = 1.0;
  int trials = 200;
  std::uint64_t seed = 0;
  double perturbation_eps = 1e-3;
  /// Overwrite the last column of X with a copy of the first.
  bool inject_duplicate_column = false;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 0;

  void validate() const;
};

struct VerdictCounts {
  int unique = 0;
  int non_unique = 0;
  int undetermined = 0;
};

struct TrialExemplar {
  int trial = 0;
  /// "model" or "surrogate" (GLM), "gaussian" (squared).
  std::string draw;
  Verdict verdict = Verdict::undetermined;
  std::vector<std::string> notes;
};

struct MonteCarloSummary {
  TrialConfig config;
  int p = 0;
  int m = 0;
  int nullity = 0;
  /// p > n with nullity(D) > n: the uniqueness theorem makes no claim.
  bool outside_theorem = false;
  /// Gaussian responses (squared) or draws from the GLM at beta = 0.
  VerdictCounts counts;
  /// GLM only: the model draws jittered into continuous responses.
  std::optional<VerdictCounts> surrogate_counts;
  /// Non-unique and undetermined trials, in trial order (at most 25).
  std::vector<TrialExemplar> exemplars;
};

MonteCarloSummary monte_carlo_uniqueness(const TrialConfig& cfg,
                                         const CertifyOptions& opts = {});

/// Deterministic per-trial generator derived from (seed, stream).
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream);

struct StabilityLevel {
  double eps = 0.0;
  int preserved = 0;
  int failures = 0;
};

struct StabilityReport {
  int directions = 0;
  /// eps at which the probe stopped (all directions preserved, or the floor).
  double final_eps = 0.0;
  /// Smallest eps tried: 10 sign_tol max(1, ||y||).
  double eps_floor = 0.0;
  int halvings = 0;
  bool stable = false;
  double preserved_fraction = 0.0;
  std::vector<StabilityLevel> levels;
  /// ||M_{A,B}|| and ||M_{A,B} fit|| for the base solution.
  double m_norm = 0.0;
  double m_fit_norm = 0.0;
  bool near_exceptional = false;
};

/// Re-solves at y + eps u for random unit u, halving eps (at most 10 times,
/// never below eps_floor) until every direction preserves (B, s, A, r).
StabilityReport local_stability_probe(const ProblemInstance& inst, const LossSpec& loss,
                                      double eps, int directions, std::uint64_t seed = 0,
                                      const GlmSolveOptions& opts = {});

struct ObservedSubgradient {
  /// "solver" or "vertex".
  std::string source;
  IndexSet boundary_set;
  SignVector boundary_signs;
};

struct InvarianceReport {
  int runs = 0;
  int distinct_boundary_sets = 0;
  std::vector<ObservedSubgradient> observed;
  /// Largest pairwise distance between the X null(D_{-B}) subspaces.
  double max_distance = 0.0;
  bool all_equal = true;
  /// Same comparison between the active-set subspace and each B subspace.
  double max_active_distance = 0.0;
  bool active_equal = true;
  std::vector<std::string> notes;
};

/// Harvests optimal subgradients by re-solving with jittered settings and by
/// visiting random vertices of the optimal face {D^T g = D^T gamma, g_A = r,
/// |g| <= 1}, then compares the induced subspaces.
InvarianceReport subspace_invariance_probe(const ProblemInstance& inst, const LossSpec& loss,
                                           int runs, std::uint64_t seed = 0,
                                           const GlmSolveOptions& opts = {});

/// P_{[D_{B\A}(null X cap null D_{-B})]^perp} D_{B\A} (X P_{null(D_{-B})})^+,
/// of shape |B\A| x n (no rows when A = B).
Matrix compute_M(const IndexSet& A, const IndexSet& B, const Matrix& X, const Matrix& D,
                 const NumericTolerances& tol = {});

}  // namespace genlasso
