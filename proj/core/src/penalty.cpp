#include "genlasso/penalty.hpp"

#include "genlasso/errors.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <string>

namespace genlasso {
namespace {

int parse_int(std::string_view s, std::string_view context) {
  int value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError("penalty spec '" + std::string(context) + "': expected integer, got '" +
                     std::string(s) + "'");
  }
  return value;
}

std::vector<int> parse_int_list(std::string_view s, std::string_view context) {
  std::vector<int> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_int(s.substr(0, comma), context));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

// Kronecker product for dense matrices.
Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

void GraphSpec::validate() const {
  if (node_count < 1) throw InputError("graph must have at least one node");
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= node_count || b >= node_count) {
      throw InputError("graph edge (" + std::to_string(a) + "," + std::to_string(b) +
                       ") references a node outside [0, " + std::to_string(node_count) + ")");
    }
    if (a == b) throw InputError("graph has a self-loop at node " + std::to_string(a));
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) {
      throw InputError("graph has duplicate edge (" + std::to_string(a) + "," +
                       std::to_string(b) + ")");
    }
  }
}

Matrix identity_penalty(int p) {
  if (p < 1) throw InputError("identity penalty needs p >= 1");
  return Matrix::Identity(p, p);
}

Matrix difference_matrix(int p, int order) {
  if (order < 1) throw InputError("difference order must be >= 1");
  if (p <= order) {
    throw InputError("difference matrix of order " + std::to_string(order) +
                     " needs p > order (got p = " + std::to_string(p) + ")");
  }
  auto first = [](int size) {
    Matrix d = Matrix::Zero(size - 1, size);
    for (int i = 0; i + 1 < size; ++i) {
      d(i, i) = -1.0;
      d(i, i + 1) = 1.0;
    }
    return d;
  };
  Matrix d = first(p);
  for (int q = 2; q <= order; ++q) d = first(p - q + 1) * d;
  return d;
}

Matrix graph_incidence(const GraphSpec& graph) {
  graph.validate();
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(graph.edges.size()), graph.node_count);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto [a, b] = graph.edges[e];
    const auto row = static_cast<Eigen::Index>(e);
    d(row, std::min(a, b)) = -1.0;
    d(row, std::max(a, b)) = 1.0;
  }
  return d;
}

Matrix graph_trend_filtering(const GraphSpec& graph, int k) {
  if (k < 0) throw InputError("graph trend filtering order must be >= 0");
  const Matrix incidence = graph_incidence(graph);
  const Matrix laplacian = incidence.transpose() * incidence;
  Matrix power = Matrix::Identity(graph.node_count, graph.node_count);
  if (k % 2 == 1) {
    for (int i = 0; i < (k + 1) / 2; ++i) power = laplacian * power;
    return power;
  }
  for (int i = 0; i < k / 2; ++i) power = laplacian * power;
  return incidence * power;
}

Matrix kronecker_trend_filtering(int N, int d, int k) {
  if (d < 1) throw InputError("Kronecker trend filtering needs d >= 1");
  if (k < 0) throw InputError("Kronecker trend filtering needs k >= 0");
  if (N <= k + 1) {
    throw InputError("Kronecker trend filtering needs N > k + 1 (got N = " + std::to_string(N) +
                     ", k = " + std::to_string(k) + ")");
  }
  const Matrix diff = difference_matrix(N, k + 1);
  const Matrix eye = Matrix::Identity(N, N);
  Matrix out(0, 0);
  for (int axis = 0; axis < d; ++axis) {
    Matrix block = axis == 0 ? diff : eye;
    for (int j = 1; j < d; ++j) block = kron(block, j == axis ? diff : eye);
    out = out.rows() == 0 ? block : vstack(out, block);
  }
  return out;
}

int nullity(const Matrix& d, const NumericTolerances& tol) {
  return static_cast<int>(d.cols()) - rank(d, tol);
}

int connected_components(const GraphSpec& graph) {
  graph.validate();
  std::vector<int> parent(graph.node_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  int components = graph.node_count;
  for (const auto& [a, b] : graph.edges) {
    const int ra = find(a);
    const int rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

GraphSpec path_graph(int n) {
  GraphSpec g;
  g.node_count = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

Matrix build_penalty(std::string_view spec, int p, const GraphSpec* graph) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const std::string_view args =
      colon == std::string_view::npos ? std::string_view() : spec.substr(colon + 1);
  auto need_graph = [&]() -> const GraphSpec& {
    if (graph == nullptr) {
      throw InputError("penalty '" + std::string(spec) + "' requires a graph");
    }
    return *graph;
  };

  if (name == "identity") return identity_penalty(p);
  if (name == "diff") {
    return difference_matrix(p, args.empty() ? 1 : parse_int(args, spec));
  }
  if (name == "graph") return graph_incidence(need_graph());
  if (name == "gtf") {
    return graph_trend_filtering(need_graph(), args.empty() ? 0 : parse_int(args, spec));
  }
  if (name == "ktf") {
    const auto v = parse_int_list(args, spec);
    if (v.size() != 3) throw InputError("ktf spec must be ktf:N,d,k");
    return kronecker_trend_filtering(v[0], v[1], v[2]);
  }
  throw InputError("unknown penalty spec '" + std::string(spec) + "'");
}

}  // namespace genlasso
