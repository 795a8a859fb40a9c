#include "genlasso/dgp.hpp"

#include "genlasso/errors.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace genlasso {
namespace {

struct Context {
  IndexSet B;
  SignVector s;
  Matrix Z;
  Vector st;
  std::vector<int> nonzero;
  std::vector<int> zero;
};

Context make_context(const Matrix& X, const Matrix& D, IndexSet B, SignVector s,
                     const NumericTolerances& tol) {
  Context ctx;
  const Matrix d_rest = select_rows(D, complement(B, static_cast<int>(D.rows())));
  const Matrix U = gauss_jordan_null_basis(d_rest, tol);
  ctx.Z = restrict_to(X, U, tol);
  Vector ds = Vector::Zero(D.cols());
  for (std::size_t k = 0; k < B.size(); ++k) ds += s[k] * D.row(B[k]).transpose();
  ctx.st = U.transpose() * ds;
  const double scale = std::max(1.0, ctx.st.size() ? ctx.st.lpNorm<Eigen::Infinity>() : 0.0);
  for (Eigen::Index j = 0; j < ctx.st.size(); ++j) {
    (std::abs(ctx.st(j)) > tol.residual_tol * scale ? ctx.nonzero : ctx.zero).push_back(static_cast<int>(j));
  }
  ctx.B = std::move(B);
  ctx.s = std::move(s);
  return ctx;
}

// ||target - proj_{span(cols)} target|| / (1 + ||target||)
double membership_residual(const Vector& target, const Matrix& cols) {
  double res = target.norm();
  if (cols.cols() > 0) {
    const Eigen::ColPivHouseholderQR<Matrix> qr(cols);
    res = (target - cols * qr.solve(target)).norm();
  }
  return res / (1.0 + target.norm());
}

bool is_zero(const Context& ctx, int j) {
  return std::find(ctx.zero.begin(), ctx.zero.end(), j) != ctx.zero.end();
}

// Case (i): Z_{i2} against span of the rest of T.
double span_case(const Context& ctx, int i2, const std::vector<int>& T) {
  Matrix cols(ctx.Z.rows(), static_cast<Eigen::Index>(T.size()) - 1);
  Eigen::Index c = 0;
  for (int j : T) {
    if (j != i2) cols.col(c++) = ctx.Z.col(j);
  }
  return membership_residual(ctx.Z.col(i2), cols);
}

// Case (ii): Z_{i1}/st_{i1} against the affine hull of the scaled nonzero
// members of T plus the span of the zero members.
double affine_case(const Context& ctx, int i1, const std::vector<int>& T) {
  const auto hit = std::find_if(T.begin(), T.end(), [&](int j) { return !is_zero(ctx, j); });
  if (hit == T.end()) return std::numeric_limits<double>::infinity();
  const int anchor = *hit;
  const Vector base = ctx.Z.col(anchor) / ctx.st(anchor);
  Matrix cols(ctx.Z.rows(), static_cast<Eigen::Index>(T.size()) - 1);
  Eigen::Index c = 0;
  for (int j : T) {
    if (j == anchor) continue;
    cols.col(c++) = is_zero(ctx, j) ? Vector(ctx.Z.col(j)) : Vector(ctx.Z.col(j) / ctx.st(j) - base);
  }
  return membership_residual(ctx.Z.col(i1) / ctx.st(i1) - base, cols);
}

// Advances `idx` (indices into a pool of size n) to the next k-combination.
bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

struct ContextOutcome {
  std::int64_t tests = 0;
  std::optional<DgpViolation> violation;
};

// Enumerates every tuple for one (B, s); stops at the first violation.
ContextOutcome scan_context(const Context& ctx, int n, const NumericTolerances& tol) {
  ContextOutcome out;
  const int k = static_cast<int>(ctx.st.size());
  if (ctx.nonzero.empty() || k < 2) return out;

  // Case (i) does not involve i1 beyond requiring one with st != 0.
  const int i1_span = ctx.nonzero.front();
  const int zsize = static_cast<int>(ctx.zero.size());
  for (int t = 1; t <= std::min(n, zsize); ++t) {
    std::vector<int> idx(t);
    for (int j = 0; j < t; ++j) idx[j] = j;
    do {
      std::vector<int> T(t);
      for (int j = 0; j < t; ++j) T[j] = ctx.zero[idx[j]];
      for (int i2 : T) {
        ++out.tests;
        const double res = span_case(ctx, i2, T);
        if (res <= tol.residual_tol) {
          DgpViolation v{ctx.B, ctx.s, {i1_span, i2}, DgpCase::span, res};
          for (int j : T) {
            if (j != i2) v.tuple.push_back(j);
          }
          out.violation = std::move(v);
          return out;
        }
      }
    } while (next_combination(idx, zsize));
  }

  for (int i1 : ctx.nonzero) {
    std::vector<int> pool;
    for (int j = 0; j < k; ++j) {
      if (j != i1) pool.push_back(j);
    }
    const int psize = static_cast<int>(pool.size());
    for (int t = 1; t <= std::min(n, psize); ++t) {
      std::vector<int> idx(t);
      for (int j = 0; j < t; ++j) idx[j] = j;
      do {
        std::vector<int> T(t);
        bool any_nonzero = false;
        for (int j = 0; j < t; ++j) {
          T[j] = pool[idx[j]];
          any_nonzero = any_nonzero || !is_zero(ctx, T[j]);
        }
        if (!any_nonzero) continue;
        ++out.tests;
        const double res = affine_case(ctx, i1, T);
        if (res <= tol.residual_tol) {
          DgpViolation v{ctx.B, ctx.s, {i1}, DgpCase::affine, res};
          v.tuple.insert(v.tuple.end(), T.begin(), T.end());
          out.violation = std::move(v);
          return out;
        }
      } while (next_combination(idx, psize));
    }
  }
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

IndexSet mask_to_set(std::uint64_t mask, int m) {
  IndexSet out;
  for (int i = 0; i < m; ++i) {
    if (mask >> i & 1U) out.push_back(i);
  }
  return out;
}

// s from a counter: bit j set means s_{j+1} = -1; s_0 stays +1 because both
// cases are invariant under s -> -s.
SignVector counter_to_signs(std::uint64_t counter, std::size_t size) {
  SignVector s(size, 1);
  for (std::size_t j = 1; j < size; ++j) {
    if (counter >> (j - 1) & 1U) s[j] = -1;
  }
  return s;
}

DgpReport sampled_check(const Matrix& X, const Matrix& D, const DgpOptions& opts) {
  DgpReport report;
  report.truncated = true;
  const int n = static_cast<int>(X.rows());
  const int m = static_cast<int>(D.rows());
  std::mt19937_64 rng(opts.seed);
  std::bernoulli_distribution coin(0.5);
  constexpr int kTuplesPerContext = 64;
  while (report.enumeration_count < opts.cap) {
    IndexSet B;
    SignVector s;
    for (int i = 0; i < m; ++i) {
      if (coin(rng)) {
        B.push_back(i);
        s.push_back(s.empty() || coin(rng) ? 1 : -1);
      }
    }
    const Context ctx = make_context(X, D, B, s, opts.tol);
    const int k = static_cast<int>(ctx.st.size());
    if (ctx.nonzero.empty() || k < 2) {
      ++report.enumeration_count;
      continue;
    }
    for (int rep = 0; rep < kTuplesPerContext && report.enumeration_count < opts.cap; ++rep) {
      const int i1 = ctx.nonzero[std::uniform_int_distribution<std::size_t>(0, ctx.nonzero.size() - 1)(rng)];
      std::vector<int> pool;
      for (int j = 0; j < k; ++j) {
        if (j != i1) pool.push_back(j);
      }
      std::shuffle(pool.begin(), pool.end(), rng);
      const int t = std::uniform_int_distribution<int>(1, std::min<int>(n, static_cast<int>(pool.size())))(rng);
      std::vector<int> T(pool.begin(), pool.begin() + t);
      std::sort(T.begin(), T.end());
      ++report.enumeration_count;
      const bool all_zero = std::all_of(T.begin(), T.end(), [&](int j) { return is_zero(ctx, j); });
      if (all_zero) {
        for (int i2 : T) {
          const double res = span_case(ctx, i2, T);
          if (res <= opts.tol.residual_tol) {
            DgpViolation v{ctx.B, ctx.s, {i1, i2}, DgpCase::span, res};
            for (int j : T) {
              if (j != i2) v.tuple.push_back(j);
            }
            report.in_position = false;
            report.violation = std::move(v);
            return report;
          }
        }
      } else {
        const double res = affine_case(ctx, i1, T);
        if (res <= opts.tol.residual_tol) {
          DgpViolation v{ctx.B, ctx.s, {i1}, DgpCase::affine, res};
          v.tuple.insert(v.tuple.end(), T.begin(), T.end());
          report.in_position = false;
          report.violation = std::move(v);
          return report;
        }
      }
    }
  }
  return report;
}

}  // namespace

const char* to_string(DgpCase c) { return c == DgpCase::span ? "span" : "affine"; }

DgpReport dgp_check_exhaustive(const Matrix& X, const Matrix& D, const DgpOptions& opts) {
  if (X.cols() != D.cols()) throw InputError("dgp_check: X and D differ in columns");
  require_finite(X, "X");
  require_finite(D, "D");
  opts.tol.validate();
  if (opts.cap < 1) throw InputError("dgp_check: cap must be positive");
  const int n = static_cast<int>(X.rows());
  const int m = static_cast<int>(D.rows());
  const int p = static_cast<int>(X.cols());
  if (m > 62) return sampled_check(X, D, opts);

  // Boundary sets ordered by size, then lexicographically.
  std::vector<std::uint64_t> masks;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) masks.push_back(mask);
  std::sort(masks.begin(), masks.end(), [m](std::uint64_t a, std::uint64_t b) {
    const int ca = std::popcount(a);
    const int cb = std::popcount(b);
    if (ca != cb) return ca < cb;
    return mask_to_set(a, m) < mask_to_set(b, m);
  });

  // Bound on the number of membership tests, from k(B) = p - rank(D_{-B}).
  double bound = 0.0;
  for (std::uint64_t mask : masks) {
    const IndexSet B = mask_to_set(mask, m);
    const int k = p - rank(select_rows(D, complement(B, m)), opts.tol);
    double tuples = 0.0;
    for (int t = 1; t <= std::min(n, k - 1); ++t) tuples += binomial(k - 1, t) * (1 + t);
    bound += std::ldexp(1.0, std::max(static_cast<int>(B.size()) - 1, 0)) * k * tuples;
    if (bound > static_cast<double>(opts.cap)) return sampled_check(X, D, opts);
  }

  // Work item: one boundary set with all of its sign patterns.
  std::vector<ContextOutcome> outcomes(masks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{masks.size()};
  auto worker = [&]() {
    for (;;) {
      const std::size_t item = next.fetch_add(1);
      if (item >= masks.size()) return;
      if (item > best.load()) continue;
      const IndexSet B = mask_to_set(masks[item], m);
      const std::uint64_t patterns = B.empty() ? 1 : (std::uint64_t{1} << (B.size() - 1));
      ContextOutcome& outcome = outcomes[item];
      for (std::uint64_t c = 0; c < patterns; ++c) {
        const Context ctx = make_context(X, D, B, counter_to_signs(c, B.size()), opts.tol);
        ContextOutcome part = scan_context(ctx, n, opts.tol);
        outcome.tests += part.tests;
        if (part.violation) {
          outcome.violation = std::move(part.violation);
          std::size_t current = best.load();
          while (item < current && !best.compare_exchange_weak(current, item)) {
          }
          break;
        }
      }
    }
  };
  int threads = opts.threads > 0 ? opts.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, 64);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  DgpReport report;
  const std::size_t last = std::min(best.load(), masks.size() - 1);
  for (std::size_t i = 0; i <= last; ++i) report.enumeration_count += outcomes[i].tests;
  if (best.load() < masks.size()) {
    report.in_position = false;
    report.violation = outcomes[best.load()].violation;
  }
  return report;
}

double dgp_violation_residual(const Matrix& X, const Matrix& D, const DgpViolation& v,
                              const NumericTolerances& tol) {
  const double inf = std::numeric_limits<double>::infinity();
  if (v.B.size() != v.s.size() || v.tuple.size() < 2) return inf;
  const Context ctx = make_context(X, D, v.B, v.s, tol);
  const int k = static_cast<int>(ctx.st.size());
  for (int j : v.tuple) {
    if (j < 0 || j >= k) return inf;
  }
  const int i1 = v.tuple[0];
  if (is_zero(ctx, i1)) return inf;
  const std::vector<int> T(v.tuple.begin() + 1, v.tuple.end());
  if (v.kind == DgpCase::span) {
    for (int j : T) {
      if (!is_zero(ctx, j)) return inf;
    }
    return span_case(ctx, T.front(), T);
  }
  return affine_case(ctx, i1, T);
}

}  // namespace genlasso
