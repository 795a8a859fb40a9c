#include "genlasso/errors.hpp"
#include "genlasso/existence.hpp"
#include "genlasso/lp.hpp"
#include "genlasso/penalty.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace genlasso;
using genlasso::testing::gaussian;

namespace {

ProblemInstance unpenalized(const Matrix& X, const Vector& y) {
  ProblemInstance inst;
  inst.X = X;
  inst.y = y;
  inst.D = identity_penalty(static_cast<int>(X.cols()));
  inst.lambda = 0.0;
  return inst;
}

// Directions on the unit sphere in R^p, p <= 3.
std::vector<Vector> sphere_grid(int p) {
  std::vector<Vector> out;
  if (p == 1) {
    out.push_back(Vector::Ones(1));
    out.push_back(-Vector::Ones(1));
  } else if (p == 2) {
    const int k = 20000;
    for (int i = 0; i < k; ++i) {
      const double t = 2 * std::numbers::pi * i / k;
      out.push_back((Vector(2) << std::cos(t), std::sin(t)).finished());
    }
  } else {
    const int k = 200000;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < k; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / k;
      const double r = std::sqrt(1.0 - z * z);
      out.push_back((Vector(3) << r * std::cos(golden * i), r * std::sin(golden * i), z).finished());
    }
  }
  return out;
}

// Strict separation Y_i x_i^T b > 0 on a dense grid. For continuous designs
// quasicomplete but not complete separation has probability zero.
bool grid_separates(const Matrix& X, const Vector& y, const std::vector<Vector>& grid) {
  const Vector Y = 2.0 * y.array() - 1.0;
  const Matrix YX = Y.asDiagonal() * X;
  for (const Vector& b : grid) {
    if ((YX * b).minCoeff() > 0.0) return true;
  }
  return false;
}

// No z with X_P z = 0, X_Z z >= 0, X_Z z != 0 (P: y > 0, Z: y = 0).
bool poisson_exists_by_alternative(const Matrix& X, const Vector& y) {
  std::vector<int> pos, zero;
  for (int i = 0; i < y.size(); ++i) (y(i) > 0 ? pos : zero).push_back(i);
  if (zero.empty()) return true;
  const Matrix xp = select_rows(X, pos), xz = select_rows(X, zero);
  lp::Problem prob = lp::Problem::with_variables(static_cast<int>(X.cols()));
  prob.eq = vstack(xp, xz.colwise().sum());
  prob.eq_rhs = Vector::Zero(prob.eq.rows());
  prob.eq_rhs(prob.eq.rows() - 1) = 1.0;
  prob.le = -xz;
  prob.le_rhs = Vector::Zero(xz.rows());
  return lp::solve(prob).status != lp::Status::optimal;
}

}  // namespace

TEST(Existence, SquaredAlwaysGuaranteed) {
  const ExistenceReport r = existence_check(unpenalized(Matrix::Ones(2, 1), Vector::Zero(2)),
                                            LossSpec::squared());
  EXPECT_EQ(r.exists, ExistenceStatus::guaranteed);
}

TEST(Existence, LogisticExamples) {
  const Vector y = (Vector(2) << 1, 0).finished();
  const ExistenceReport sep =
      existence_check(unpenalized((Matrix(2, 1) << 1, -1).finished(), y), LossSpec::logistic());
  EXPECT_EQ(sep.exists, ExistenceStatus::violated);
  EXPECT_EQ(sep.condition_checked, ExistenceCondition::logistic_separation);
  ASSERT_TRUE(sep.witness.has_value());
  EXPECT_GT((*sep.witness)(0), 0.0);

  const ExistenceReport ok =
      existence_check(unpenalized(Matrix::Ones(2, 1), y), LossSpec::logistic());
  EXPECT_EQ(ok.exists, ExistenceStatus::guaranteed);
}

TEST(Existence, LogisticAgreesWithGridSearch) {
  std::mt19937_64 rng(71);
  std::bernoulli_distribution coin(0.5);
  std::array<std::vector<Vector>, 4> grids;
  for (int p = 1; p <= 3; ++p) grids[p] = sphere_grid(p);
  int separated = 0;
  for (int t = 0; t < 100; ++t) {
    const int p = genlasso::testing::uniform_int(rng, 1, 3);
    const int n = genlasso::testing::uniform_int(rng, 2, 8);
    const Matrix X = gaussian(rng, n, p);
    Vector y(n);
    for (int i = 0; i < n; ++i) y(i) = coin(rng) ? 1.0 : 0.0;
    const ExistenceReport r = existence_check(unpenalized(X, y), LossSpec::logistic());
    const bool grid = grid_separates(X, y, grids[p]);
    separated += grid;
    EXPECT_EQ(r.exists == ExistenceStatus::violated, grid) << "trial " << t;
    if (r.witness) {
      const Vector Y = 2.0 * y.array() - 1.0;
      EXPECT_GE((Y.asDiagonal() * X * *r.witness).minCoeff(), -1e-8);
    }
  }
  EXPECT_GT(separated, 10);
  EXPECT_LT(separated, 90);
}

TEST(Existence, PoissonExamples) {
  const Matrix ones = Matrix::Ones(2, 1);
  const ExistenceReport ok =
      existence_check(unpenalized(ones, (Vector(2) << 0, 2).finished()), LossSpec::poisson());
  EXPECT_EQ(ok.exists, ExistenceStatus::guaranteed);
  ASSERT_TRUE(ok.witness.has_value());
  EXPECT_NEAR(ok.witness->sum(), 0.0, 1e-10);
  EXPECT_GT(((Vector(2) << 0, 2).finished() + *ok.witness).minCoeff(), 0.0);

  const ExistenceReport bad =
      existence_check(unpenalized(ones, Vector::Zero(2)), LossSpec::poisson());
  EXPECT_EQ(bad.exists, ExistenceStatus::violated);
}

TEST(Existence, PoissonAgreesWithAlternativeLp) {
  std::mt19937_64 rng(72);
  std::poisson_distribution<int> count(0.6);
  int violated = 0;
  for (int t = 0; t < 100; ++t) {
    const int p = genlasso::testing::uniform_int(rng, 1, 3);
    const int n = genlasso::testing::uniform_int(rng, p, 6);
    const Matrix X = gaussian(rng, n, p);
    Vector y(n);
    for (int i = 0; i < n; ++i) y(i) = count(rng);
    const ExistenceReport r = existence_check(unpenalized(X, y), LossSpec::poisson());
    const bool exists = poisson_exists_by_alternative(X, y);
    violated += !exists;
    EXPECT_EQ(r.exists == ExistenceStatus::guaranteed, exists) << "trial " << t;
    if (r.witness) {
      EXPECT_LT((X.transpose() * *r.witness).norm(), 1e-8);
      EXPECT_GT((y + *r.witness).minCoeff(), 0.0);
    }
  }
  EXPECT_GT(violated, 5);
}

TEST(Existence, LassoPenaltyAlwaysGuaranteed) {
  std::mt19937_64 rng(73);
  for (LossFamily family : {LossFamily::logistic, LossFamily::poisson}) {
    for (int t = 0; t < 20; ++t) {
      ProblemInstance inst = unpenalized(gaussian(rng, 4, 3), Vector::Zero(4));
      inst.lambda = 0.5;
      const ExistenceReport r = existence_check(inst, LossSpec::of(family));
      EXPECT_EQ(r.exists, ExistenceStatus::guaranteed);
      EXPECT_EQ(r.condition_checked, ExistenceCondition::regularized_null_space);
    }
  }
}

TEST(Existence, RegularizedNullSpaceFailureFallsBack) {
  // null(D) = constants is not inside null(X); the data is separated along it.
  ProblemInstance inst;
  inst.X = (Matrix(2, 2) << 1, 1, -1, -1).finished();
  inst.D = difference_matrix(2, 1);
  inst.y = (Vector(2) << 1, 0).finished();
  inst.lambda = 1.0;
  EXPECT_NE(existence_check(inst, LossSpec::logistic()).exists, ExistenceStatus::guaranteed);
}

TEST(Stiemke, Examples) {
  const StiemkeResult a = stiemke_alternative((Matrix(1, 2) << 1, 1).finished());
  EXPECT_EQ(a.feasible, StiemkeSystem::system2);
  EXPECT_GT(a.witness(0), 0.0);
  const StiemkeResult b = stiemke_alternative((Matrix(1, 2) << 1, -1).finished());
  EXPECT_EQ(b.feasible, StiemkeSystem::system1);
  EXPECT_LT(std::abs(b.witness(0) - b.witness(1)), 1e-12);
  EXPECT_LE(b.witness.maxCoeff(), -1.0 + 1e-12);
}

TEST(Stiemke, ExactlyOneSystemWithVerifiedWitness) {
  std::mt19937_64 rng(74);
  for (int t = 0; t < 200; ++t) {
    const int n = genlasso::testing::uniform_int(rng, 1, 4);
    const int p = genlasso::testing::uniform_int(rng, 1, 6);
    const Matrix A = gaussian(rng, n, p);
    const StiemkeResult r = stiemke_alternative(A);
    // Feasibility of each system decided independently.
    lp::Problem s1 = lp::Problem::with_variables(p);
    s1.eq = A;
    s1.eq_rhs = Vector::Zero(n);
    s1.upper = Vector::Constant(p, -1.0);
    const bool one = lp::solve(s1).status == lp::Status::optimal;
    lp::Problem s2 = lp::Problem::with_variables(n);
    s2.le = -A.transpose();
    s2.le_rhs = Vector::Zero(p);
    s2.eq = A.transpose().colwise().sum();
    s2.eq_rhs = Vector::Ones(1);
    const bool two = lp::solve(s2).status == lp::Status::optimal;
    EXPECT_NE(one, two) << "trial " << t;
    if (r.feasible == StiemkeSystem::system1) {
      EXPECT_TRUE(one);
      EXPECT_LT((A * r.witness).norm(), 1e-8);
      EXPECT_LT(r.witness.maxCoeff(), 0.0);
    } else {
      EXPECT_TRUE(two);
      const Vector aty = A.transpose() * r.witness;
      EXPECT_GE(aty.minCoeff(), -1e-9);
      EXPECT_GT(aty.norm(), 1e-9);
    }
  }
}

TEST(Stiemke, ConsistentWithLogisticCheck) {
  std::mt19937_64 rng(75);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 50; ++t) {
    const int p = genlasso::testing::uniform_int(rng, 1, 3);
    const int n = genlasso::testing::uniform_int(rng, 2, 7);
    const Matrix X = gaussian(rng, n, p);
    Vector y(n);
    for (int i = 0; i < n; ++i) y(i) = coin(rng) ? 1.0 : 0.0;
    const Vector Y = 2.0 * y.array() - 1.0;
    const StiemkeResult s = stiemke_alternative(X.transpose() * Y.asDiagonal());
    const ExistenceReport r = existence_check(unpenalized(X, y), LossSpec::logistic());
    EXPECT_EQ(s.feasible == StiemkeSystem::system1, r.exists == ExistenceStatus::guaranteed);
  }
}
