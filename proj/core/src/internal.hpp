#pragma once

// Helpers shared by the squared-loss and GLM solvers and by certify. Not
// installed.

#include "genlasso/problem.hpp"
#include "genlasso/solver_sq.hpp"

namespace genlasso::detail {

/// Pieces of the implicit forms for a given (B, s): U spans null(D_{-B})
/// orthonormally, XU = X U, pinv = (XU)^+, shift = lambda (P X^T)^+ D_B^T s.
struct ImplicitPieces {
  Matrix U;
  Matrix XU;
  Matrix pinv;
  Vector shift;
};

ImplicitPieces implicit_pieces(const ProblemInstance& inst, const IndexSet& B,
                               const SignVector& s, const NumericTolerances& tol);

/// Nearest point to g0 in {g : M g = h, |g_i| <= 1}, by semismooth Newton on
/// the dual. Returns false if the residual target is not reached.
bool project_box_affine(const Matrix& M, const Vector& h, const Vector& g0, double target,
                        Vector& out);

/// Optimal subgradient closest to gamma_hint given the score
/// X^T (y - grad psi(X beta)): gamma_A = r and D^T gamma = score / lambda.
bool recover_gamma(const Matrix& D, const IndexSet& A, const SignVector& r, const Vector& score,
                   double lambda, const Vector& gamma_hint, const NumericTolerances& tol,
                   Vector& gamma);

/// Fills every derived field of a SolveResult from (beta, gamma).
SolveResult assemble_result(const ProblemInstance& inst, const LossSpec& loss, Vector beta,
                            Vector gamma, const NumericTolerances& tol);

/// Squared-loss solve with an optional warm start.
SolveResult solve_squared(const ProblemInstance& inst, const SolveOptions& opts,
                          const Vector* beta0, const Vector* gamma0);

/// Least-squares style solve for lambda = 0 (or an empty D).
SolveResult solve_unpenalized_squared(const ProblemInstance& inst, const NumericTolerances& tol);

/// Gamma that is a valid subgradient of ||.||_1 at D beta when lambda plays no
/// role: sign(D beta) on the active set, zero elsewhere.
Vector trivial_gamma(const Matrix& D, const Vector& beta, const NumericTolerances& tol);

}  // namespace genlasso::detail

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace genlasso::detail {

/// Runs body(i) for i in [0, count) on `threads` workers (0 = hardware
/// concurrency). Results must be written to per-index slots.
template <class Body>
void parallel_for(int count, int threads, Body body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, count));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
}

}  // namespace genlasso::detail
