#pragma once

#include <map>
#include <string>
#include <vector>

#include "temgrid/domain.hpp"
#include "temgrid/kernels.hpp"
#include "temgrid/model_builder.hpp"
#include "temgrid/simplex.hpp"

namespace temgrid::solver {

enum class SolveStatus { kOptimal, kLimit };

const char* to_string(SolveStatus status);

// Per-step flows of one building, read back from the solution vector.
struct BuildingDispatch {
  std::vector<double> grid_import_kw;
  std::vector<double> grid_export_kw;
  std::vector<double> bs_charge_kw;
  std::vector<double> bs_discharge_kw;
  std::vector<double> soc;
  std::vector<double> comm_export_kw;
  std::vector<double> comm_import_kw;
  std::vector<std::vector<double>> ev_charge_kw;     // [session][step]
  std::vector<std::vector<double>> ev_discharge_kw;  // [session][step]
};

struct DispatchSolution {
  RunMode mode = RunMode::kCommunity;
  SolveStatus status = SolveStatus::kOptimal;
  double objective = 0.0;
  // Lowest LP bound among nodes left open; equals objective when optimal.
  double best_bound = 0.0;
  std::vector<double> values;
  std::vector<BuildingDispatch> buildings;
  int nodes = 0;          // LP relaxations solved inside the search tree
  int branched_nodes = 0; // nodes that had to split on a violated pair
  long lp_iterations = 0;
  bool root_clean = false;
};

class SolverLimitError : public Error {
 public:
  using Error::Error;
};

class InfeasibleModel : public Error {
 public:
  InfeasibleModel(const std::string& what, std::vector<std::string> rows)
      : Error(what), rows_(std::move(rows)) {}
  [[nodiscard]] const std::vector<std::string>& rows() const { return rows_; }

 private:
  std::vector<std::string> rows_;
};

class UnboundedModel : public Error {
 public:
  using Error::Error;
};

// Largest min(a, b) over the registered pairs, and the pair attaining it.
struct PairViolation {
  double amount = 0.0;
  int pair = -1;
};
PairViolation worst_pair(const model::MilpModel& model, const std::vector<double>& values);

// Best-first branch and bound over violated complementarity pairs.
DispatchSolution solve(const model::MilpModel& model, const SolverOptions& options,
                       kernels::Backend backend = kernels::Backend::kOpenMP);

BuildingDispatch extract_dispatch(const model::MilpModel& model, const std::vector<double>& values, int building);

struct VerificationReport {
  std::map<lp::RowFamily, double> row_residual;  // max residual per family present
  double bound_violation = 0.0;
  double complementarity = 0.0;

  // Families (and "bounds", "complementarity") whose residual exceeds tol.
  // Pairs are judged against comp_tol when it is given.
  [[nodiscard]] std::vector<std::string> flagged(double tol, double comp_tol = -1.0) const;
  [[nodiscard]] bool clean(double tol, double comp_tol = -1.0) const { return flagged(tol, comp_tol).empty(); }
  [[nodiscard]] double residual(lp::RowFamily family) const;
};

VerificationReport verify(const model::MilpModel& model, const std::vector<double>& values);

}  // namespace temgrid::solver
