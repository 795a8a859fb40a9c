#include "genlasso/bregman.hpp"
#include "genlasso/errors.hpp"
#include "genlasso/loss.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace genlasso;
using genlasso::testing::gaussian;
using genlasso::testing::uniform;

namespace {

Vector uniform_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

// Both conditions of the first-order optimality system for the projection.
std::pair<double, double> optimality_residuals(const LossSpec& loss, const Vector& x,
                                               const Vector& c, const SubspaceBasis& L,
                                               const Vector& a) {
  const Vector g = loss.grad_conj(x) - loss.grad_conj(a);
  const double along = project(L, g).norm();
  const Vector d = x - c;
  const double across = (d - project(L, d)).norm();
  return {along, across};
}

}  // namespace

TEST(Loss, ParseAndNames) {
  EXPECT_EQ(parse_loss_family("logistic"), LossFamily::logistic);
  EXPECT_STREQ(to_string(LossFamily::poisson), "poisson");
  EXPECT_THROW(parse_loss_family("gamma"), InputError);
}

TEST(Loss, ConjugateGradientsInvertEachOther) {
  std::mt19937_64 rng(51);
  for (const LossSpec& loss : {LossSpec::squared(), LossSpec::logistic(), LossSpec::poisson()}) {
    for (int t = 0; t < 50; ++t) {
      const Vector z = uniform_vector(rng, 6, -5.0, 5.0);
      EXPECT_LT((loss.grad_conj(loss.grad_psi(z)) - z).cwiseAbs().maxCoeff(), 1e-10)
          << to_string(loss.family);
      Vector w = uniform_vector(rng, 6, 0.01, 0.99);
      if (loss.family == LossFamily::squared) w = uniform_vector(rng, 6, -3.0, 3.0);
      if (loss.family == LossFamily::poisson) w = uniform_vector(rng, 6, 0.01, 20.0);
      EXPECT_LT((loss.grad_psi(loss.grad_conj(w)) - w).cwiseAbs().maxCoeff(), 1e-10)
          << to_string(loss.family);
    }
  }
}

TEST(Loss, FenchelYoungEquality) {
  // psi(z) + psi*(grad psi(z)) = z^T grad psi(z)
  std::mt19937_64 rng(52);
  for (const LossSpec& loss : {LossSpec::squared(), LossSpec::logistic(), LossSpec::poisson()}) {
    const Vector z = uniform_vector(rng, 5, -3.0, 3.0);
    const Vector w = loss.grad_psi(z);
    EXPECT_NEAR(loss.psi(z) + loss.conj(w), z.dot(w), 1e-10);
  }
}

TEST(Loss, DomainPredicates) {
  const LossSpec lg = LossSpec::logistic();
  EXPECT_TRUE(lg.in_conj_domain_interior((Vector(2) << 0.3, 0.9).finished()));
  EXPECT_FALSE(lg.in_conj_domain_interior((Vector(2) << 0.0, 0.5).finished()));
  EXPECT_NEAR(lg.conj_domain_margin((Vector(2) << 0.3, 0.9).finished()), 0.1, 1e-15);
  const LossSpec po = LossSpec::poisson();
  EXPECT_FALSE(po.in_conj_domain_interior((Vector(1) << -0.1).finished()));
  EXPECT_TRUE(std::isinf(po.conj((Vector(1) << -0.1).finished())));
  EXPECT_TRUE(std::isinf(LossSpec::squared().conj_domain_margin(Vector::Zero(3))));
}

TEST(Bregman, SquaredIsEuclideanProjection) {
  std::mt19937_64 rng(53);
  const LossSpec sq = LossSpec::squared();
  for (int t = 0; t < 50; ++t) {
    const int n = genlasso::testing::uniform_int(rng, 2, 8);
    const int k = genlasso::testing::uniform_int(rng, 1, n);
    const Matrix basis = gaussian(rng, n, k);
    const Vector c = genlasso::testing::gaussian_vector(rng, n);
    const Vector a = genlasso::testing::gaussian_vector(rng, n);
    // Closed form: c + B (B^T B)^{-1} B^T (a - c).
    const Vector oracle = c + basis * (basis.transpose() * basis).ldlt().solve(basis.transpose() * (a - c));
    const Vector x = bregman_project_affine(sq, c, column_space_basis(basis), a);
    EXPECT_LT((x - oracle).norm(), 1e-8 * (1 + oracle.norm()));
  }
}

TEST(Bregman, TrivialSubspaceReturnsAnchor) {
  const Vector c = (Vector(3) << 0.2, 0.5, 0.7).finished();
  const Vector a = Vector::Constant(3, 0.5);
  EXPECT_EQ(bregman_project_affine(LossSpec::logistic(), c, SubspaceBasis::zero(3), a), c);
}

TEST(Bregman, GlmOptimalityConditionsHold) {
  std::mt19937_64 rng(54);
  for (const LossSpec& loss : {LossSpec::logistic(), LossSpec::poisson()}) {
    for (int t = 0; t < 50; ++t) {
      const int n = genlasso::testing::uniform_int(rng, 2, 8);
      const int k = genlasso::testing::uniform_int(rng, 1, n);
      const SubspaceBasis L = column_space_basis(gaussian(rng, n, k));
      const double hi = loss.family == LossFamily::logistic ? 0.8 : 5.0;
      const Vector c = uniform_vector(rng, n, 0.2, hi);
      const Vector a = uniform_vector(rng, n, 0.1, hi);
      const Vector x = bregman_project_affine(loss, c, L, a);
      EXPECT_TRUE(loss.in_conj_domain_interior(x));
      const auto [along, across] = optimality_residuals(loss, x, c, L, a);
      EXPECT_LT(along, 1e-8) << to_string(loss.family) << " trial " << t;
      EXPECT_LT(across, 1e-8) << to_string(loss.family) << " trial " << t;
    }
  }
}

TEST(Bregman, AnchorOutsideDomainStillProjects) {
  // c itself has a negative entry but c + L meets the positive orthant.
  const LossSpec po = LossSpec::poisson();
  const Vector c = (Vector(2) << -1.0, 3.0).finished();
  Matrix l(2, 1);
  l << 1, -1;
  const SubspaceBasis L = column_space_basis(l);
  const Vector a = Vector::Ones(2);
  const Vector x = bregman_project_affine(po, c, L, a);
  EXPECT_TRUE(po.in_conj_domain_interior(x));
  const auto [along, across] = optimality_residuals(po, x, c, L, a);
  EXPECT_LT(along, 1e-8);
  EXPECT_LT(across, 1e-8);
}

TEST(Bregman, Errors) {
  const LossSpec lg = LossSpec::logistic();
  Matrix l(2, 1);
  l << 1, 1;
  const SubspaceBasis L = column_space_basis(l);
  EXPECT_THROW(bregman_project_affine(lg, Vector::Constant(2, 0.5), L, Vector::Constant(2, 1.5)),
               InputError);
  // c + L = {(t + 2, t - 2)} never enters the open unit box.
  EXPECT_THROW(bregman_project_affine(lg, (Vector(2) << 2.0, -2.0).finished(), L,
                                      Vector::Constant(2, 0.5)),
               NumericalError);
}
