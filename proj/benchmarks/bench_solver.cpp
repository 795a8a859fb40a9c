#include "genlasso/certify.hpp"
#include "genlasso/dgp.hpp"
#include "genlasso/penalty.hpp"
#include "genlasso/solver_glm.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace genlasso;

namespace {

ProblemInstance instance(int n, int p, bool fused, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ProblemInstance inst;
  inst.X = Matrix::NullaryExpr(n, p, [&] { return normal(rng); });
  inst.y = Vector::NullaryExpr(n, [&] { return normal(rng); });
  inst.D = fused ? difference_matrix(p, 1) : identity_penalty(p);
  inst.lambda = 1.0;
  return inst;
}

void BM_SolveLasso(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ProblemInstance inst = instance(n, 2 * n, false, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst));
}
BENCHMARK(BM_SolveLasso)->Arg(10)->Arg(25)->Arg(50);

void BM_SolveFused(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ProblemInstance inst = instance(n, 2 * n, true, 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst));
}
BENCHMARK(BM_SolveFused)->Arg(10)->Arg(25)->Arg(50);

void BM_SolveLogistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ProblemInstance inst = instance(n, n / 2, false, 3);
  for (Eigen::Index i = 0; i < inst.y.size(); ++i) inst.y(i) = inst.y(i) > 0.0 ? 1.0 : 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_glm(inst, LossSpec::logistic()));
}
BENCHMARK(BM_SolveLogistic)->Arg(20)->Arg(40);

void BM_Certify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ProblemInstance inst = instance(n, 2 * n, true, 4);
  for (auto _ : state) benchmark::DoNotOptimize(certify_uniqueness(inst));
}
BENCHMARK(BM_Certify)->Arg(5)->Arg(10)->Arg(20);

void BM_DgpExhaustive(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const ProblemInstance inst = instance(3, p, true, 5);
  for (auto _ : state) benchmark::DoNotOptimize(dgp_check_exhaustive(inst.X, inst.D));
}
BENCHMARK(BM_DgpExhaustive)->Arg(3)->Arg(4)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
