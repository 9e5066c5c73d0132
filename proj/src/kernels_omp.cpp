#include <omp.h>

#include <algorithm>
#include <vector>

#include "temgrid/kernels.hpp"

namespace temgrid::kernels::omp {

namespace {
// Below this many outer entries the fork/join costs more than the loop.
constexpr int kParallelThreshold = 4096;
}  // namespace

int max_threads() { return omp_get_max_threads(); }

void reduced_costs(const SparseMatrix& csc, std::span<const double> cost, std::span<const double> y,
                   std::span<double> out) {
  const int n = csc.cols;
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (int j = 0; j < n; ++j) {
    double d = cost[j];
    for (int k = csc.start[j]; k < csc.start[j + 1]; ++k) d -= y[csc.index[k]] * csc.value[k];
    out[j] = d;
  }
}

void row_activity(const SparseMatrix& csr, std::span<const double> x, std::span<double> out) {
  const int m = csr.rows;
#pragma omp parallel for schedule(static) if (m > kParallelThreshold)
  for (int i = 0; i < m; ++i) {
    double a = 0.0;
    for (int k = csr.start[i]; k < csr.start[i + 1]; ++k) a += csr.value[k] * x[csr.index[k]];
    out[i] = a;
  }
}

int argmax_positive(std::span<const double> score) {
  const int n = static_cast<int>(score.size());
  const int threads = n > kParallelThreshold ? omp_get_max_threads() : 1;
  std::vector<int> local_best(threads, -1);
  std::vector<double> local_score(threads, 0.0);
#pragma omp parallel num_threads(threads)
  {
    const int tid = omp_get_thread_num();
    const int nt = omp_get_num_threads();
    // Contiguous chunks in thread order keep the lowest-index tie rule.
    const int chunk = (n + nt - 1) / nt;
    const int lo = tid * chunk;
    const int hi = std::min(n, lo + chunk);
    for (int j = lo; j < hi; ++j) {
      if (score[j] > local_score[tid]) {
        local_score[tid] = score[j];
        local_best[tid] = j;
      }
    }
  }
  int best = -1;
  double best_score = 0.0;
  for (int t = 0; t < threads; ++t) {
    if (local_best[t] >= 0 && local_score[t] > best_score) {
      best_score = local_score[t];
      best = local_best[t];
    }
  }
  return best;
}

}  // namespace temgrid::kernels::omp
