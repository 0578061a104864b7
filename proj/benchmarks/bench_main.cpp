#include <benchmark/benchmark.h>

#include <cmath>

#include "mwold/completion.hpp"
#include "mwold/graphops.hpp"
#include "mwold/miso.hpp"
#include "mwold/models.hpp"
#include "mwold/wold.hpp"

namespace {

using namespace mwold;

void BM_Defect(benchmark::State& state) {
  const FiniteOperator t = assemble_shift(models::dirichlet_shift(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(defect(t, 3));
}
BENCHMARK(BM_Defect)->RangeMultiplier(2)->Range(16, 256);

void BM_KernelCondition(benchmark::State& state) {
  const FiniteOperator t = assemble_shift(models::operator_polynomial_shift({{1, 1}, {1, 2, 1}}, models::hadamard(), state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_condition(t, 2));
}
BENCHMARK(BM_KernelCondition)->RangeMultiplier(2)->Range(8, 128);

void BM_AdmitsWold(benchmark::State& state) {
  const FiniteOperator t = assemble_shift(models::dirichlet_shift(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(admits_wold(t, 2));
}
BENCHMARK(BM_AdmitsWold)->RangeMultiplier(2)->Range(8, 64);

void BM_Positivity(benchmark::State& state) {
  std::vector<double> c{1.0};
  for (Index k = 1; k < state.range(0); ++k) c.push_back(1.0 / static_cast<double>(k * k));
  for (auto _ : state) benchmark::DoNotOptimize(positivity_horizon(c));
}
BENCHMARK(BM_Positivity)->DenseRange(2, 8, 2);

void BM_CompleteOperator(benchmark::State& state) {
  const Index d = state.range(0);
  const ComplexMatrix u = random_unitary(d, 5);
  std::vector<ComplexMatrix> init;
  for (double base : {1.3, 1.2}) {
    Eigen::VectorXd e(d);
    for (Index i = 0; i < d; ++i) e(i) = base + 0.01 * static_cast<double>(i);
    init.push_back(u * e.cast<Complex>().asDiagonal() * u.adjoint());
  }
  for (auto _ : state) benchmark::DoNotOptimize(complete_operator(init, 3));
}
BENCHMARK(BM_CompleteOperator)->RangeMultiplier(2)->Range(2, 32);

void BM_AssembleComposition(benchmark::State& state) {
  const OneCircuitGraph g = models::linear_branch_graph(Rational(2), Rational(3));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_composition(g, state.range(0)));
}
BENCHMARK(BM_AssembleComposition)->RangeMultiplier(2)->Range(8, 256);

}  // namespace

BENCHMARK_MAIN();
