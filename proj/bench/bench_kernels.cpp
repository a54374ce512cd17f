// Serial reference vs OpenMP kernels. Arguments: subdivisions n, degree r.
#include <benchmark/benchmark.h>

#include <random>

#include "nltg/assembly.hpp"
#include "nltg/kernels.hpp"

using namespace nltg;

namespace {

StateVector random_state(const SpacePtr& s) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> val(-0.1, 0.1);
  StateVector w(s);
  for (double& c : w.coefficients) c = val(rng);
  return zero_boundary(std::move(w));
}

Exec exec_of(const benchmark::State& st) { return st.range(2) ? Exec::parallel : Exec::serial; }

void BM_Residual(benchmark::State& st) {
  auto s = build_space(uniform_triangulation(static_cast<int>(st.range(0))), static_cast<int>(st.range(1)));
  const StateVector w = random_state(s);
  const ProblemDef p = mean_curvature_problem();
  for (auto _ : st) benchmark::DoNotOptimize(assemble_residual(*s, p, w, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * s->num_elements());
}

void BM_Linearized(benchmark::State& st) {
  auto s = build_space(uniform_triangulation(static_cast<int>(st.range(0))), static_cast<int>(st.range(1)));
  const StateVector w = random_state(s);
  const ProblemDef p = mean_curvature_problem();
  for (auto _ : st) benchmark::DoNotOptimize(assemble_linearized(*s, p, w, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * s->num_elements());
}

void BM_Spmv(benchmark::State& st) {
  auto s = build_space(uniform_triangulation(static_cast<int>(st.range(0))), static_cast<int>(st.range(1)));
  const StateVector w = random_state(s);
  const SparseMatrix B = assemble_linearized(*s, mean_curvature_problem(), w);
  std::vector<double> y(B.nrows);
  for (auto _ : st) {
    kernels::spmv(B, w.coefficients, y, exec_of(st));
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(B.nnz()));
}

void BM_Dot(benchmark::State& st) {
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  std::vector<double> a(n, 0.5), b(n, 2.0);
  const Exec e = st.range(1) ? Exec::parallel : Exec::serial;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::dot(a, b, e));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(n));
}

}  // namespace

BENCHMARK(BM_Residual)->ArgsProduct({{64, 128}, {1, 3}, {0, 1}})->ArgNames({"n", "r", "par"});
BENCHMARK(BM_Linearized)->ArgsProduct({{64, 128}, {1, 3}, {0, 1}})->ArgNames({"n", "r", "par"});
BENCHMARK(BM_Spmv)->ArgsProduct({{128, 256}, {1, 3}, {0, 1}})->ArgNames({"n", "r", "par"});
BENCHMARK(BM_Dot)->ArgsProduct({{1 << 16, 1 << 20}, {0, 1}})->ArgNames({"len", "par"});

BENCHMARK_MAIN();
