#include "temgrid/kernels.hpp"

namespace temgrid::kernels {

namespace serial {

void reduced_costs(const SparseMatrix& csc, std::span<const double> cost, std::span<const double> y,
                   std::span<double> out) {
  for (int j = 0; j < csc.cols; ++j) {
    double d = cost[j];
    for (int k = csc.start[j]; k < csc.start[j + 1]; ++k) d -= y[csc.index[k]] * csc.value[k];
    out[j] = d;
  }
}

void row_activity(const SparseMatrix& csr, std::span<const double> x, std::span<double> out) {
  for (int i = 0; i < csr.rows; ++i) {
    double a = 0.0;
    for (int k = csr.start[i]; k < csr.start[i + 1]; ++k) a += csr.value[k] * x[csr.index[k]];
    out[i] = a;
  }
}

int argmax_positive(std::span<const double> score) {
  int best = -1;
  double best_score = 0.0;
  for (std::size_t j = 0; j < score.size(); ++j) {
    if (score[j] > best_score) {
      best_score = score[j];
      best = static_cast<int>(j);
    }
  }
  return best;
}

}  // namespace serial

namespace {

// Regroups entries by their inner index. `outer` is the number of groups in
// the input and `inner` the range of the stored indices.
void regroup(const SparseMatrix& m, int outer, int inner, SparseMatrix& t) {
  t.start.assign(inner + 1, 0);
  for (int idx : m.index) ++t.start[idx + 1];
  for (int i = 0; i < inner; ++i) t.start[i + 1] += t.start[i];
  t.index.resize(m.index.size());
  t.value.resize(m.value.size());
  std::vector<int> fill(t.start.begin(), t.start.end() - 1);
  for (int j = 0; j < outer; ++j) {
    for (int k = m.start[j]; k < m.start[j + 1]; ++k) {
      const int pos = fill[m.index[k]]++;
      t.index[pos] = j;
      t.value[pos] = m.value[k];
    }
  }
}

}  // namespace

SparseMatrix to_csr(const SparseMatrix& csc) {
  SparseMatrix t;
  t.rows = csc.rows;
  t.cols = csc.cols;
  regroup(csc, csc.cols, csc.rows, t);
  return t;
}

SparseMatrix to_csc(const SparseMatrix& csr) {
  SparseMatrix t;
  t.rows = csr.rows;
  t.cols = csr.cols;
  regroup(csr, csr.rows, csr.cols, t);
  return t;
}

}  // namespace temgrid::kernels
