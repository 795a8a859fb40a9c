#include "genlasso/errors.hpp"
#include "genlasso/penalty.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

using namespace genlasso;

namespace {

int components_by_union_find(const GraphSpec& g) {
  std::vector<int> parent(g.node_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int count = g.node_count;
  for (const auto& [a, b] : g.edges) {
    const int ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb, --count;
  }
  return count;
}

GraphSpec random_graph(std::mt19937_64& rng, int nodes, double density) {
  GraphSpec g;
  g.node_count = nodes;
  std::bernoulli_distribution coin(density);
  for (int i = 0; i < nodes; ++i) {
    for (int j = i + 1; j < nodes; ++j) {
      if (coin(rng)) g.edges.emplace_back(i, j);
    }
  }
  return g;
}

}  // namespace

TEST(Penalty, Identity) {
  EXPECT_EQ(identity_penalty(3), Matrix::Identity(3, 3));
  EXPECT_EQ(nullity(identity_penalty(7)), 0);
}

TEST(Penalty, FirstDifferenceStencil) {
  Matrix expected(3, 4);
  expected << -1, 1, 0, 0, 0, -1, 1, 0, 0, 0, -1, 1;
  EXPECT_EQ(difference_matrix(4, 1), expected);
}

TEST(Penalty, SecondDifferenceIsComposition) {
  const Matrix d2 = difference_matrix(4, 2);
  EXPECT_EQ(d2, difference_matrix(3, 1) * difference_matrix(4, 1));
  EXPECT_EQ(d2.row(0), (Eigen::RowVectorXd(4) << 1, -2, 1, 0).finished());
}

TEST(Penalty, DifferenceNullity) {
  for (int k = 0; k <= 2; ++k) EXPECT_EQ(nullity(difference_matrix(10, k + 1)), k + 1);
  EXPECT_THROW(difference_matrix(3, 3), InputError);
}

TEST(Penalty, PathIncidenceIsFirstDifference) {
  EXPECT_EQ(graph_incidence(path_graph(3)), difference_matrix(3, 1));
  EXPECT_EQ(graph_incidence(path_graph(9)), difference_matrix(9, 1));
}

TEST(Penalty, IncidenceOrientation) {
  GraphSpec g{4, {{2, 0}, {1, 3}}};
  const Matrix d = graph_incidence(g);
  EXPECT_EQ(d(0, 0), -1.0);
  EXPECT_EQ(d(0, 2), 1.0);
  EXPECT_EQ(d(1, 1), -1.0);
  EXPECT_EQ(d(1, 3), 1.0);
  EXPECT_EQ(nullity(d), 2);
}

TEST(Penalty, IncidenceNullityCountsComponents) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const GraphSpec g = random_graph(rng, genlasso::testing::uniform_int(rng, 2, 12),
                                     genlasso::testing::uniform(rng, 0.05, 0.5));
    const int r = components_by_union_find(g);
    EXPECT_EQ(connected_components(g), r);
    if (g.edges.empty()) continue;
    EXPECT_EQ(nullity(graph_incidence(g)), r);
  }
}

TEST(Penalty, TrendFilteringBaseCaseAndPathKernel) {
  const GraphSpec path = path_graph(6);
  EXPECT_EQ(graph_trend_filtering(path, 0), graph_incidence(path));
  const Matrix d1 = graph_trend_filtering(path, 1);
  const Vector ones = Vector::Ones(6);
  EXPECT_LT((d1 * ones).norm(), 1e-12);
  EXPECT_GT((d1 * Vector::LinSpaced(6, 0, 5)).norm(), 1e-6);
}

TEST(Penalty, TrendFilteringNullityEqualsComponents) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 20; ++t) {
    GraphSpec g = random_graph(rng, genlasso::testing::uniform_int(rng, 4, 10), 0.35);
    if (g.edges.empty()) continue;
    const int r = components_by_union_find(g);
    for (int k = 0; k <= 3; ++k) EXPECT_EQ(nullity(graph_trend_filtering(g, k)), r) << "k=" << k;
  }
}

TEST(Penalty, KroneckerShapesAndNullity) {
  EXPECT_EQ(kronecker_trend_filtering(5, 1, 1), difference_matrix(5, 2));
  const Matrix d = kronecker_trend_filtering(4, 2, 0);
  EXPECT_EQ(d.rows(), 24);
  EXPECT_EQ(d.cols(), 16);
  EXPECT_EQ(nullity(d), 1);
  EXPECT_EQ(nullity(kronecker_trend_filtering(5, 2, 1)), 4);
  for (int N = 2; N <= 6; ++N) {
    for (int dim = 1; dim <= 2; ++dim) {
      for (int k = 0; k <= 2 && N > k + 1; ++k) {
        const Matrix m = kronecker_trend_filtering(N, dim, k);
        EXPECT_EQ(m.rows(), (N - k - 1) * (dim == 2 ? N : 1) * dim);
        EXPECT_EQ(nullity(m), dim == 2 ? (k + 1) * (k + 1) : k + 1);
      }
    }
  }
  EXPECT_THROW(kronecker_trend_filtering(2, 1, 1), InputError);
}

TEST(Penalty, GraphValidation) {
  EXPECT_THROW(graph_incidence(GraphSpec{3, {{0, 0}}}), InputError);
  EXPECT_THROW(graph_incidence(GraphSpec{3, {{0, 3}}}), InputError);
  EXPECT_THROW(graph_incidence(GraphSpec{3, {{0, 1}, {1, 0}}}), InputError);
}

TEST(Penalty, BuilderSpecs) {
  const GraphSpec g = path_graph(5);
  EXPECT_EQ(build_penalty("identity", 4), Matrix::Identity(4, 4));
  EXPECT_EQ(build_penalty("diff:2", 6), difference_matrix(6, 2));
  EXPECT_EQ(build_penalty("graph", 5, &g), graph_incidence(g));
  EXPECT_EQ(build_penalty("gtf:2", 5, &g), graph_trend_filtering(g, 2));
  EXPECT_EQ(build_penalty("ktf:4,2,0", 0), kronecker_trend_filtering(4, 2, 0));
  EXPECT_THROW(build_penalty("graph", 5), InputError);
  EXPECT_THROW(build_penalty("bogus", 5), InputError);
  EXPECT_THROW(build_penalty("ktf:4,2", 5), InputError);
}
