// Serial reference kernels against their OpenMP counterparts, plus one full
// solve of the bundled community fixture on each backend.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <vector>

#include "temgrid/kernels.hpp"
#include "temgrid/model_builder.hpp"
#include "temgrid/scenario_io.hpp"
#include "temgrid/solver.hpp"
#include "temgrid/tariff_engine.hpp"

using namespace temgrid;

namespace {

kernels::SparseMatrix random_csc(int rows, int cols, int per_col, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> row(0, rows - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  kernels::SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.start.push_back(0);
  for (int j = 0; j < cols; ++j) {
    std::vector<int> picked;
    while (static_cast<int>(picked.size()) < per_col) {
      const int r = row(gen);
      if (std::find(picked.begin(), picked.end(), r) == picked.end()) picked.push_back(r);
    }
    std::sort(picked.begin(), picked.end());
    for (int r : picked) {
      m.index.push_back(r);
      m.value.push_back(val(gen));
    }
    m.start.push_back(static_cast<int>(m.index.size()));
  }
  return m;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = val(gen);
  return v;
}

kernels::Backend backend_of(const benchmark::State& state) {
  return state.range(1) == 0 ? kernels::Backend::kSerial : kernels::Backend::kOpenMP;
}

void BM_ReducedCosts(benchmark::State& state) {
  const int cols = static_cast<int>(state.range(0));
  const auto csc = random_csc(cols / 2, cols, 6, 1);
  const auto cost = random_vector(cols, 2);
  const auto y = random_vector(cols / 2, 3);
  std::vector<double> out(cols);
  for (auto _ : state) {
    kernels::reduced_costs(backend_of(state), csc, cost, y, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(csc.index.size()));
}

void BM_RowActivity(benchmark::State& state) {
  const int cols = static_cast<int>(state.range(0));
  const auto csr = kernels::to_csr(random_csc(cols / 2, cols, 6, 4));
  const auto x = random_vector(cols, 5);
  std::vector<double> out(csr.rows);
  for (auto _ : state) {
    kernels::row_activity(backend_of(state), csr, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(csr.index.size()));
}

void BM_ArgmaxPositive(benchmark::State& state) {
  const auto score = random_vector(static_cast<std::size_t>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::argmax_positive(backend_of(state), score));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FixtureCommunitySolve(benchmark::State& state) {
  const auto sc = io::load_scenario(TEMGRID_FIXTURE_PATH);
  const auto prices = tariff::price_community(sc);
  const auto model = model::build(sc, prices, RunMode::kCommunity);
  for (auto _ : state) {
    auto sol = solver::solve(model, sc.options.solver, backend_of(state));
    benchmark::DoNotOptimize(sol.objective);
  }
}

void kernel_args(benchmark::internal::Benchmark* b) {
  for (int n : {1 << 10, 1 << 14, 1 << 18}) {
    b->Args({n, 0});
    b->Args({n, 1});
  }
  b->ArgNames({"n", "omp"});
}

}  // namespace

BENCHMARK(BM_ReducedCosts)->Apply(kernel_args);
BENCHMARK(BM_RowActivity)->Apply(kernel_args);
BENCHMARK(BM_ArgmaxPositive)->Apply(kernel_args);
BENCHMARK(BM_FixtureCommunitySolve)->Args({0, 0})->Args({0, 1})->ArgNames({"", "omp"})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
