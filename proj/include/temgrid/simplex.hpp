#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <vector>

#include "temgrid/domain.hpp"
#include "temgrid/kernels.hpp"
#include "temgrid/linear_program.hpp"

namespace temgrid::lp {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LpStatus status);

// Basis statuses for structural then slack columns: 0 basic, 1 at lower,
// 2 at upper, 3 nonbasic free at zero. Empty when no basis is available.
struct BasisState {
  std::vector<signed char> status;
};

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double objective_value = 0.0;
  std::vector<double> values;         // one per column
  std::vector<double> dual_values;    // one per row
  std::vector<double> reduced_costs;  // one per column
  // Certificates: rows still violated after phase one, or a ray along which
  // the objective decreases without bound.
  std::vector<int> infeasible_rows;
  std::vector<double> unbounded_ray;
  int iterations = 0;
  BasisState basis;  // final basis when optimal
};

struct SimplexOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  double pivot_tol = 1e-9;
  int refactor_interval = 100;
  int degenerate_limit = 50;
  long max_iterations = 0;  // 0 = automatic
  kernels::Backend backend = kernels::Backend::kOpenMP;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  // Starting basis from an earlier solve of a program with the same rows and
  // columns (bounds may differ). Reoptimized with the dual simplex when it is
  // no longer primal feasible; ignored if unusable.
  const BasisState* warm_start = nullptr;
};

struct PivotRecord {
  long iteration = 0;
  int entering = -1;
  int leaving = -1;
  double pivot = 0.0;
  double step = 0.0;
};

class NumericalBreakdown : public Error {
 public:
  NumericalBreakdown(const std::string& what, std::vector<PivotRecord> history);
  [[nodiscard]] const std::vector<PivotRecord>& history() const { return history_; }

 private:
  std::vector<PivotRecord> history_;
};

class LimitReached : public Error {
 public:
  using Error::Error;
};

// Bounded-variable revised simplex (two phases, Dantzig pricing with a
// Bland fallback on long degenerate runs).
LpSolution solve_lp(const LinearProgram& program, const SimplexOptions& options = {});

// Lagrangian lower bound on the optimum for any row multipliers `duals`.
// Reduced costs within `tol` of zero on an infinite bound are treated as 0.
double dual_bound(const LinearProgram& program, std::span<const double> duals, double tol = 1e-9);

}  // namespace temgrid::lp
