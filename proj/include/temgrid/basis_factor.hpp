#pragma once

#include <span>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "temgrid/kernels.hpp"

namespace temgrid::lp {

// Basis inverse in product form: a sparse LU of the last refactorized basis
// followed by one eta column per pivot since then.
class BasisFactor {
 public:
  // Factorizes the columns of `matrix` (CSC) listed in `basis`. Returns false
  // if the basis is singular.
  bool refactor(const kernels::SparseMatrix& matrix, std::span<const int> basis);

  // v <- B^{-1} v
  void ftran(std::vector<double>& v) const;
  // v <- B^{-T} v
  void btran(std::vector<double>& v) const;
  // Records that basis position `row` was replaced by a column whose
  // transformed form (B^{-1} a) is `alpha`.
  void update(int row, const std::vector<double>& alpha);

  [[nodiscard]] int updates() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };

  int dim_ = 0;
  // transpose() on Eigen's SparseLU is non-const.
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

}  // namespace temgrid::lp
