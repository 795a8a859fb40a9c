#include "genlasso/lp.hpp"

#include "genlasso/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace genlasso::lp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// How an original variable maps onto nonnegative standard-form columns.
struct VarMap {
  enum class Kind { shift, reflect, split } kind;
  int col = 0;     // first standard column
  double offset = 0.0;
};

class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double& at(int i, int j) { return t_(i, j); }
  double at(int i, int j) const { return t_(i, j); }
  double& rhs(int i) { return t_(i, cols()); }
  double& cost(int j) { return t_(rows(), j); }
  double value() const { return -t_(rows(), cols()); }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i <= rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[r] = c;
  }

  // Bland's rule over columns [0, usable). Returns status.
  Status run(int usable, double tol, int max_pivots) {
    for (int it = 0; it < max_pivots; ++it) {
      int enter = -1;
      for (int j = 0; j < usable; ++j) {
        if (t_(rows(), j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::optimal;
      int leave = -1;
      double best = kInf;
      for (int i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a > tol) {
          const double ratio = t_(i, cols()) / a;
          if (ratio < best - tol ||
              (std::abs(ratio - best) <= tol && leave >= 0 && basis_[i] < basis_[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return Status::unbounded;
      pivot(leave, enter);
    }
    return Status::iteration_limit;
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
};

}  // namespace

Problem Problem::with_variables(int count) {
  Problem p;
  p.objective = Vector::Zero(count);
  p.eq = Matrix::Zero(0, count);
  p.eq_rhs = Vector::Zero(0);
  p.le = Matrix::Zero(0, count);
  p.le_rhs = Vector::Zero(0);
  p.lower = Vector::Constant(count, -kInf);
  p.upper = Vector::Constant(count, kInf);
  return p;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

Solution solve(const Problem& problem, double tol, int max_pivots) {
  const int n = static_cast<int>(problem.objective.size());
  if (problem.eq.cols() != n && problem.eq.rows() > 0) throw InputError("lp: eq width");
  if (problem.le.cols() != n && problem.le.rows() > 0) throw InputError("lp: le width");
  if (problem.lower.size() != n || problem.upper.size() != n) throw InputError("lp: bounds");
  if (problem.eq.rows() != problem.eq_rhs.size() || problem.le.rows() != problem.le_rhs.size()) {
    throw InputError("lp: rhs size");
  }

  // Variable substitution into nonnegative columns.
  std::vector<VarMap> vars(n);
  int std_cols = 0;
  int extra_upper_rows = 0;
  for (int j = 0; j < n; ++j) {
    const double lo = problem.lower(j);
    const double hi = problem.upper(j);
    if (lo > hi) return {Status::infeasible, Vector(), 0.0};
    if (std::isfinite(lo)) {
      vars[j] = {VarMap::Kind::shift, std_cols++, lo};
      if (std::isfinite(hi)) ++extra_upper_rows;
    } else if (std::isfinite(hi)) {
      vars[j] = {VarMap::Kind::reflect, std_cols++, hi};
    } else {
      vars[j] = {VarMap::Kind::split, std_cols, 0.0};
      std_cols += 2;
    }
  }

  const int eq_rows = static_cast<int>(problem.eq.rows());
  const int le_rows = static_cast<int>(problem.le.rows()) + extra_upper_rows;
  const int rows = eq_rows + le_rows;
  const int slack0 = std_cols;
  const int art0 = slack0 + le_rows;
  const int cols = art0 + rows;

  // Row coefficients in standard columns plus constant shift moved to rhs.
  auto expand = [&](const auto& coeffs, double rhs, Eigen::Ref<Eigen::RowVectorXd> out) {
    for (int j = 0; j < n; ++j) {
      const double a = coeffs(j);
      if (a == 0.0) continue;
      switch (vars[j].kind) {
        case VarMap::Kind::shift:
          out(vars[j].col) += a;
          rhs -= a * vars[j].offset;
          break;
        case VarMap::Kind::reflect:
          out(vars[j].col) -= a;
          rhs -= a * vars[j].offset;
          break;
        case VarMap::Kind::split:
          out(vars[j].col) += a;
          out(vars[j].col + 1) -= a;
          break;
      }
    }
    return rhs;
  };

  Tableau tab(rows, cols);
  Eigen::RowVectorXd buf(cols);
  int r = 0;
  for (int i = 0; i < eq_rows; ++i, ++r) {
    buf.setZero();
    const double rhs = expand(problem.eq.row(i), problem.eq_rhs(i), buf);
    for (int c = 0; c < cols; ++c) tab.at(r, c) = buf(c);
    tab.rhs(r) = rhs;
  }
  int slack = slack0;
  for (int i = 0; i < problem.le.rows(); ++i, ++r) {
    buf.setZero();
    const double rhs = expand(problem.le.row(i), problem.le_rhs(i), buf);
    for (int c = 0; c < cols; ++c) tab.at(r, c) = buf(c);
    tab.at(r, slack++) = 1.0;
    tab.rhs(r) = rhs;
  }
  for (int j = 0; j < n; ++j) {
    if (vars[j].kind == VarMap::Kind::shift && std::isfinite(problem.upper(j))) {
      tab.at(r, vars[j].col) = 1.0;
      tab.at(r, slack++) = 1.0;
      tab.rhs(r) = problem.upper(j) - problem.lower(j);
      ++r;
    }
  }

  // Phase 1: artificial identity, minimize their sum.
  for (int i = 0; i < rows; ++i) {
    if (tab.rhs(i) < 0.0) {
      for (int c = 0; c <= cols; ++c) tab.at(i, c) = -tab.at(i, c);
    }
    tab.at(i, art0 + i) = 1.0;
    tab.basis()[i] = art0 + i;
  }
  for (int c = 0; c <= cols; ++c) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += tab.at(i, c);
    tab.cost(c) = (c >= art0 && c < cols) ? 0.0 : -s;
  }
  Status st = tab.run(cols, tol, max_pivots);
  if (st == Status::iteration_limit) return {st, Vector(), 0.0};

  double rhs_scale = 1.0;
  for (int i = 0; i < rows; ++i) rhs_scale = std::max(rhs_scale, std::abs(tab.rhs(i)));
  if (tab.value() > tol * rhs_scale * std::max(1, rows)) {
    return {Status::infeasible, Vector(), 0.0};
  }

  // Drive artificials out of the basis where possible.
  for (int i = 0; i < rows; ++i) {
    if (tab.basis()[i] < art0) continue;
    for (int c = 0; c < art0; ++c) {
      if (std::abs(tab.at(i, c)) > tol) {
        tab.pivot(i, c);
        break;
      }
    }
  }

  // Phase 2 costs in standard columns.
  Vector std_cost = Vector::Zero(cols);
  for (int j = 0; j < n; ++j) {
    const double cj = problem.objective(j);
    switch (vars[j].kind) {
      case VarMap::Kind::shift:
        std_cost(vars[j].col) = cj;
        break;
      case VarMap::Kind::reflect:
        std_cost(vars[j].col) = -cj;
        break;
      case VarMap::Kind::split:
        std_cost(vars[j].col) = cj;
        std_cost(vars[j].col + 1) = -cj;
        break;
    }
  }
  for (int c = 0; c < cols; ++c) tab.cost(c) = std_cost(c);
  tab.cost(cols) = 0.0;
  for (int i = 0; i < rows; ++i) {
    const int b = tab.basis()[i];
    const double cb = std_cost(b);
    if (cb == 0.0) continue;
    for (int c = 0; c <= cols; ++c) tab.cost(c) -= cb * tab.at(i, c);
  }
  st = tab.run(art0, tol, max_pivots);
  if (st != Status::optimal) return {st, Vector(), 0.0};

  Vector std_x = Vector::Zero(cols);
  for (int i = 0; i < rows; ++i) std_x(tab.basis()[i]) = std::max(0.0, tab.rhs(i));

  Solution out;
  out.status = Status::optimal;
  out.x.resize(n);
  for (int j = 0; j < n; ++j) {
    switch (vars[j].kind) {
      case VarMap::Kind::shift: out.x(j) = vars[j].offset + std_x(vars[j].col); break;
      case VarMap::Kind::reflect: out.x(j) = vars[j].offset - std_x(vars[j].col); break;
      case VarMap::Kind::split: out.x(j) = std_x(vars[j].col) - std_x(vars[j].col + 1); break;
    }
  }
  out.objective = problem.objective.dot(out.x);
  return out;
}

}  // namespace genlasso::lp
