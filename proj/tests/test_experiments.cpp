#include "genlasso/errors.hpp"
#include "genlasso/experiments.hpp"
#include "genlasso/penalty.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace genlasso;
using genlasso::testing::gaussian;
using genlasso::testing::gaussian_vector;

namespace {

ProblemInstance soft(double y0) {
  ProblemInstance inst;
  inst.X = Matrix::Identity(2, 2);
  inst.D = Matrix::Identity(2, 2);
  inst.y = (Vector(2) << y0, 0.5).finished();
  inst.lambda = 1.0;
  return inst;
}

// 4-cycle plus a chord: m = 5 rows of rank 3, so subgradients need not be
// unique.
GraphSpec cycle_with_chord() { return GraphSpec{4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}}}; }

}  // namespace

TEST(ComputeM, EqualSetsGiveEmptyMatrix) {
  std::mt19937_64 rng(101);
  const Matrix M = compute_M({0, 2}, {0, 2}, gaussian(rng, 4, 3), identity_penalty(3));
  EXPECT_EQ(M.rows(), 0);
  EXPECT_EQ(M.cols(), 4);
}

TEST(ComputeM, LassoWithInjectiveDesign) {
  std::mt19937_64 rng(102);
  const Matrix X = gaussian(rng, 5, 4);
  const IndexSet A{1}, B{1, 3};
  const Matrix M = compute_M(A, B, X, identity_penalty(4));
  // (X P)^+ = E_B X_B^+ and D_{B\A} picks the row for index 3.
  const Matrix xb = select_rows(Matrix(X.transpose()), B).transpose();
  const Matrix xb_pinv = (xb.transpose() * xb).ldlt().solve(xb.transpose());
  ASSERT_EQ(M.rows(), 1);
  EXPECT_LT((M.row(0) - xb_pinv.row(1)).norm(), 1e-10);
}

TEST(ComputeM, ProjectsOutSharedKernelImage) {
  // null(X) cap null(D_{-B}) nontrivial: D_{B\A} applied to it is removed.
  Matrix X = (Matrix(1, 2) << 1, 1).finished();
  const Matrix M = compute_M({}, {0, 1}, X, identity_penalty(2));
  // W = span(1, -1); D_B W = span(1, -1); the projector keeps (1, 1)/2.
  ASSERT_EQ(M.rows(), 2);
  EXPECT_LT((M.col(0) - Vector::Constant(2, 0.5)).norm(), 1e-10);
}

TEST(ComputeM, RejectsNonSubset) {
  std::mt19937_64 rng(103);
  EXPECT_THROW(compute_M({0, 2}, {0}, gaussian(rng, 3, 3), identity_penalty(3)), InputError);
}

TEST(Stability, SoftThresholdIsStable) {
  const StabilityReport r = local_stability_probe(soft(3.0), LossSpec::squared(), 1e-3, 20, 7);
  EXPECT_TRUE(r.stable);
  EXPECT_EQ(r.halvings, 0);
  EXPECT_DOUBLE_EQ(r.preserved_fraction, 1.0);
  EXPECT_FALSE(r.near_exceptional);
}

TEST(Stability, ThresholdTieIsUnstableAndFlagged) {
  // y_1 = lambda puts the first coordinate exactly on the kink.
  const StabilityReport r = local_stability_probe(soft(1.0), LossSpec::squared(), 1e-3, 20, 7);
  EXPECT_FALSE(r.stable);
  EXPECT_GT(r.halvings, 0);
  EXPECT_GE(r.final_eps, r.eps_floor);
  EXPECT_LT(0.5 * r.final_eps, r.eps_floor);
  EXPECT_LT(r.preserved_fraction, 1.0);
  EXPECT_TRUE(r.near_exceptional);
  EXPECT_GT(r.m_norm, 0.0);
}

TEST(Stability, LogisticInstanceIsStable) {
  std::mt19937_64 rng(104);
  ProblemInstance inst;
  inst.X = gaussian(rng, 8, 3);
  inst.D = identity_penalty(3);
  inst.y = (Vector(8) << 1, 0, 1, 1, 0, 0, 1, 0).finished();
  inst.lambda = 0.3;
  const StabilityReport r = local_stability_probe(inst, LossSpec::logistic(), 1e-3, 10, 1);
  EXPECT_TRUE(r.stable);
  EXPECT_FALSE(r.near_exceptional);
}

TEST(Invariance, FullRowRankPenaltyHasSingleBoundarySet) {
  std::mt19937_64 rng(105);
  ProblemInstance inst;
  inst.X = gaussian(rng, 4, 5);
  inst.D = difference_matrix(5, 1);
  inst.y = gaussian_vector(rng, 4);
  inst.lambda = 0.5;
  const InvarianceReport r = subspace_invariance_probe(inst, LossSpec::squared(), 6, 3);
  EXPECT_EQ(r.distinct_boundary_sets, 1);
  EXPECT_TRUE(r.all_equal);
  EXPECT_TRUE(r.active_equal);
}

TEST(Invariance, RankDeficientPenaltyGivesEqualSubspaces) {
  std::mt19937_64 rng(106);
  const Matrix D = graph_incidence(cycle_with_chord());
  int multi = 0;
  for (int t = 0; t < 15; ++t) {
    ProblemInstance inst;
    inst.X = gaussian(rng, 3, 4);
    inst.D = D;
    inst.y = gaussian_vector(rng, 3);
    inst.lambda = genlasso::testing::uniform(rng, 0.2, 1.0);
    const InvarianceReport r = subspace_invariance_probe(inst, LossSpec::squared(), 8, t);
    if (r.distinct_boundary_sets >= 2) ++multi;
    EXPECT_TRUE(r.all_equal) << "trial " << t << " distance " << r.max_distance;
    EXPECT_TRUE(r.active_equal) << "trial " << t << " distance " << r.max_active_distance;
  }
  EXPECT_GT(multi, 0);
}

TEST(MonteCarlo, LassoAboveSampleSizeIsUnique) {
  TrialConfig cfg;
  cfg.n = 5;
  cfg.p = 10;
  cfg.trials = 30;
  cfg.seed = 11;
  const MonteCarloSummary s = monte_carlo_uniqueness(cfg);
  EXPECT_EQ(s.counts.non_unique, 0);
  EXPECT_LE(s.counts.undetermined, 1);
  EXPECT_FALSE(s.outside_theorem);
  EXPECT_FALSE(s.surrogate_counts.has_value());
}

TEST(MonteCarlo, KroneckerGridIsUnique) {
  TrialConfig cfg;
  cfg.n = 3;
  cfg.penalty = "ktf:4,2,0";
  cfg.trials = 10;
  cfg.seed = 12;
  const MonteCarloSummary s = monte_carlo_uniqueness(cfg);
  EXPECT_EQ(s.p, 16);
  EXPECT_EQ(s.nullity, 1);
  EXPECT_EQ(s.counts.non_unique, 0);
}

TEST(MonteCarlo, DuplicatedColumnIsNonUnique) {
  TrialConfig cfg;
  cfg.n = 5;
  cfg.p = 4;
  cfg.lambda = 0.2;
  cfg.trials = 20;
  cfg.seed = 13;
  cfg.inject_duplicate_column = true;
  const MonteCarloSummary s = monte_carlo_uniqueness(cfg);
  EXPECT_EQ(s.counts.unique + s.counts.non_unique + s.counts.undetermined, 20);
  EXPECT_GE(s.counts.non_unique, 15);
  EXPECT_FALSE(s.exemplars.empty());
}

TEST(MonteCarlo, OutsideTheoremIsLabeled) {
  TrialConfig cfg;
  cfg.n = 2;
  cfg.p = 6;
  cfg.penalty = "diff:3";
  cfg.trials = 3;
  const MonteCarloSummary s = monte_carlo_uniqueness(cfg);
  EXPECT_EQ(s.nullity, 3);
  EXPECT_TRUE(s.outside_theorem);
}

TEST(MonteCarlo, GlmReportsSurrogateCounts) {
  TrialConfig cfg;
  cfg.n = 6;
  cfg.p = 3;
  cfg.loss = LossFamily::poisson;
  cfg.lambda = 0.5;
  cfg.trials = 10;
  cfg.seed = 14;
  const MonteCarloSummary s = monte_carlo_uniqueness(cfg);
  ASSERT_TRUE(s.surrogate_counts.has_value());
  EXPECT_EQ(s.surrogate_counts->unique + s.surrogate_counts->non_unique +
                s.surrogate_counts->undetermined,
            10);
  EXPECT_EQ(s.surrogate_counts->non_unique, 0);
}

TEST(MonteCarlo, ReproducibleAcrossThreadCounts) {
  TrialConfig cfg;
  cfg.n = 4;
  cfg.p = 6;
  cfg.penalty = "diff:1";
  cfg.trials = 12;
  cfg.seed = 15;
  cfg.inject_duplicate_column = true;
  cfg.threads = 1;
  const MonteCarloSummary a = monte_carlo_uniqueness(cfg);
  cfg.threads = 3;
  const MonteCarloSummary b = monte_carlo_uniqueness(cfg);
  EXPECT_EQ(a.counts.unique, b.counts.unique);
  EXPECT_EQ(a.counts.non_unique, b.counts.non_unique);
  ASSERT_EQ(a.exemplars.size(), b.exemplars.size());
  for (std::size_t i = 0; i < a.exemplars.size(); ++i) {
    EXPECT_EQ(a.exemplars[i].trial, b.exemplars[i].trial);
    EXPECT_EQ(a.exemplars[i].verdict, b.exemplars[i].verdict);
  }
}

TEST(MonteCarlo, ConfigValidation) {
  TrialConfig cfg;
  cfg.trials = 0;
  EXPECT_THROW(monte_carlo_uniqueness(cfg), InputError);
  cfg = TrialConfig{};
  cfg.perturbation_eps = 0.0;
  EXPECT_THROW(cfg.validate(), InputError);
}

TEST(Substream, DeterministicAndDistinct) {
  auto a = substream(1, 2), b = substream(1, 2), c = substream(1, 3), d = substream(2, 2);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}
