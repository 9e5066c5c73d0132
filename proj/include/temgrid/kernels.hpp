#pragma once

#include <span>
#include <vector>

namespace temgrid::kernels {

// Compressed sparse column / row storage. `start` has one extra entry.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> start;
  std::vector<int> index;
  std::vector<double> value;
};

enum class Backend { kSerial, kOpenMP };

// Reference implementations. The OpenMP versions must match them bit for bit.
namespace serial {
// out_j = cost_j - sum_i y_i a_ij over the columns of a CSC matrix.
void reduced_costs(const SparseMatrix& csc, std::span<const double> cost, std::span<const double> y,
                   std::span<double> out);
// out_i = sum_j a_ij x_j over the rows of a CSR matrix.
void row_activity(const SparseMatrix& csr, std::span<const double> x, std::span<double> out);
// Index of the largest positive score, lowest index on ties; -1 if none.
int argmax_positive(std::span<const double> score);
}  // namespace serial

namespace omp {
void reduced_costs(const SparseMatrix& csc, std::span<const double> cost, std::span<const double> y,
                   std::span<double> out);
void row_activity(const SparseMatrix& csr, std::span<const double> x, std::span<double> out);
int argmax_positive(std::span<const double> score);
int max_threads();
}  // namespace omp

inline void reduced_costs(Backend backend, const SparseMatrix& csc, std::span<const double> cost,
                          std::span<const double> y, std::span<double> out) {
  backend == Backend::kOpenMP ? omp::reduced_costs(csc, cost, y, out) : serial::reduced_costs(csc, cost, y, out);
}

inline void row_activity(Backend backend, const SparseMatrix& csr, std::span<const double> x,
                         std::span<double> out) {
  backend == Backend::kOpenMP ? omp::row_activity(csr, x, out) : serial::row_activity(csr, x, out);
}

inline int argmax_positive(Backend backend, std::span<const double> score) {
  return backend == Backend::kOpenMP ? omp::argmax_positive(score) : serial::argmax_positive(score);
}

// Storage conversions; the matrix and its dimensions are unchanged.
SparseMatrix to_csr(const SparseMatrix& csc);
SparseMatrix to_csc(const SparseMatrix& csr);

}  // namespace temgrid::kernels
