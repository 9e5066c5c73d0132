#include "temgrid/basis_factor.hpp"

#include <cmath>

namespace temgrid::lp {

bool BasisFactor::refactor(const kernels::SparseMatrix& matrix, std::span<const int> basis) {
  dim_ = static_cast<int>(basis.size());
  etas_.clear();
  std::vector<Eigen::Triplet<double>> triplets;
  for (int pos = 0; pos < dim_; ++pos) {
    const int col = basis[pos];
    for (int k = matrix.start[col]; k < matrix.start[col + 1]; ++k) {
      triplets.emplace_back(matrix.index[k], pos, matrix.value[k]);
    }
  }
  Eigen::SparseMatrix<double> b(dim_, dim_);
  b.setFromTriplets(triplets.begin(), triplets.end());
  b.makeCompressed();
  lu_.analyzePattern(b);
  lu_.factorize(b);
  return lu_.info() == Eigen::Success;
}

void BasisFactor::ftran(std::vector<double>& v) const {
  Eigen::Map<Eigen::VectorXd> rhs(v.data(), dim_);
  Eigen::VectorXd solved = lu_.solve(rhs);
  rhs = solved;
  for (const auto& eta : etas_) {
    const double pivot_value = v[eta.row] / eta.pivot;
    if (pivot_value != 0.0) {
      for (std::size_t k = 0; k < eta.index.size(); ++k) v[eta.index[k]] -= eta.value[k] * pivot_value;
    }
    v[eta.row] = pivot_value;
  }
}

void BasisFactor::btran(std::vector<double>& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->row];
    for (std::size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
    v[it->row] = s / it->pivot;
  }
  Eigen::Map<Eigen::VectorXd> rhs(v.data(), dim_);
  Eigen::VectorXd solved = lu_.transpose().solve(rhs);
  rhs = solved;
}

void BasisFactor::update(int row, const std::vector<double>& alpha) {
  Eta eta;
  eta.row = row;
  eta.pivot = alpha[row];
  for (int i = 0; i < dim_; ++i) {
    if (i != row && alpha[i] != 0.0) {
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
  }
  etas_.push_back(std::move(eta));
}

}  // namespace temgrid::lp
