#pragma once

// Penalty matrices for the common generalized lasso special cases, plus their
// structural metadata.

#include "genlasso/linalg.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace genlasso {

/// Undirected, unweighted graph. Edges are unordered pairs without
/// self-loops or duplicates.
struct GraphSpec {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;

  /// Throws InputError on out-of-range nodes, self-loops or duplicate edges.
  void validate() const;
};

Matrix identity_penalty(int p);

/// Order-q difference operator, shape (p - q) x p. Order 1 rows are
/// e_{i+1} - e_i; higher orders compose first differences.
Matrix difference_matrix(int p, int order);

/// Oriented incidence matrix: one row per edge (in input order), -1 at the
/// lower-indexed endpoint and +1 at the other.
Matrix graph_incidence(const GraphSpec& graph);

/// k-th order graph trend filtering operator. With Delta = incidence and
/// L = Delta^T Delta, the operator is L^{(k+1)/2} for odd k and
/// Delta L^{k/2} for even k (so k = 0 gives the incidence matrix).
Matrix graph_trend_filtering(const GraphSpec& graph, int k);

/// k-th order Kronecker trend filtering on a d-dimensional grid with side N:
/// d stacked blocks, block j applies the order-(k+1) difference along axis j.
Matrix kronecker_trend_filtering(int N, int d, int k);

/// cols(D) - rank(D).
int nullity(const Matrix& d, const NumericTolerances& tol = {});

/// Connected components by union-find; independent of any rank computation.
int connected_components(const GraphSpec& graph);

/// Path graph 0 - 1 - ... - (n-1).
GraphSpec path_graph(int n);

/// Builds a penalty from a CLI-style spec:
///   "identity" | "diff:q" | "graph" | "gtf:k" | "ktf:N,d,k".
/// `p` is required for identity/diff; `graph` is required for graph/gtf.
Matrix build_penalty(std::string_view spec, int p, const GraphSpec* graph = nullptr);

}  // namespace genlasso
