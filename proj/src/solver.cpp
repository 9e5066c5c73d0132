#include "temgrid/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <queue>

#include <fmt/format.h>

namespace temgrid::solver {

const char* to_string(SolveStatus status) {
  return status == SolveStatus::kOptimal ? "optimal" : "limit";
}

PairViolation worst_pair(const model::MilpModel& model, const std::vector<double>& values) {
  PairViolation worst;
  for (int k = 0; k < static_cast<int>(model.complementarity_pairs.size()); ++k) {
    const auto& p = model.complementarity_pairs[k];
    const double amount = std::min(values[p.first], values[p.second]);
    if (amount > worst.amount) {
      worst.amount = amount;
      worst.pair = k;
    }
  }
  return worst;
}

BuildingDispatch extract_dispatch(const model::MilpModel& model, const std::vector<double>& values, int b) {
  using model::VarKind;
  const auto& cat = model.catalog;
  const int steps = cat.steps();
  BuildingDispatch d;
  auto series = [&](VarKind kind) {
    std::vector<double> out(steps);
    for (int h = 0; h < steps; ++h) out[h] = values.at(cat.index(kind, b, h));
    return out;
  };
  d.grid_import_kw = series(VarKind::kGridImport);
  d.grid_export_kw = series(VarKind::kGridExport);
  d.bs_charge_kw = series(VarKind::kBsCharge);
  d.bs_discharge_kw = series(VarKind::kBsDischarge);
  d.soc = series(VarKind::kSoc);
  d.comm_export_kw = series(VarKind::kCommExport);
  d.comm_import_kw = series(VarKind::kCommImport);
  for (int n = 0; n < cat.sessions(b); ++n) {
    std::vector<double> ch(steps);
    std::vector<double> dis(steps);
    for (int h = 0; h < steps; ++h) {
      ch[h] = values.at(cat.ev_index(VarKind::kEvCharge, b, n, h));
      dis[h] = values.at(cat.ev_index(VarKind::kEvDischarge, b, n, h));
    }
    d.ev_charge_kw.push_back(std::move(ch));
    d.ev_discharge_kw.push_back(std::move(dis));
  }
  return d;
}

namespace {

struct Node {
  double bound = 0.0;
  long id = 0;
  std::vector<int> fixed_zero;
  std::shared_ptr<const lp::BasisState> basis;  // parent's optimal basis
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const model::MilpModel& model, const SolverOptions& options, kernels::Backend backend)
      : model_(model), options_(options), work_(model.lp) {
    simplex_.feas_tol = options.feas_tol;
    simplex_.opt_tol = options.opt_tol;
    simplex_.backend = backend;
    // Search on costs normalized to unit magnitude so tolerances mean the
    // same thing whatever currency scale the tariffs come in.
    double largest = 0.0;
    for (const auto& c : work_.columns) largest = std::max(largest, std::abs(c.cost));
    if (largest > 0.0) {
      cost_scale_ = 1.0 / largest;
      for (auto& c : work_.columns) c.cost *= cost_scale_;
      work_.objective_constant *= cost_scale_;
    }
    simplex_.deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(options.time_limit_seconds));
    rows_of_.resize(model.lp.num_columns());
    for (int i = 0; i < model.lp.num_rows(); ++i) {
      for (const auto& t : model.lp.rows[i].terms) rows_of_[t.var].push_back(i);
    }
    in_pair_.assign(model.lp.num_columns(), false);
    for (const auto& p : model.complementarity_pairs) {
      in_pair_[p.first] = true;
      in_pair_[p.second] = true;
    }
  }

  DispatchSolution run();

 private:
  // Returns nullopt when the node LP is infeasible.
  std::optional<lp::LpSolution> solve_node(const std::vector<int>& fixed_zero, const lp::BasisState* warm = nullptr);
  void tighten_free_slack(std::vector<double>& x) const;
  void offer(const std::vector<double>& x);
  void dive(lp::LpSolution sol, std::vector<int> fixed);

  const model::MilpModel& model_;
  const SolverOptions& options_;
  lp::LinearProgram work_;  // costs multiplied by cost_scale_
  double cost_scale_ = 1.0;
  lp::SimplexOptions simplex_;
  std::vector<std::vector<int>> rows_of_;
  std::vector<bool> in_pair_;
  std::optional<std::vector<double>> incumbent_;
  double incumbent_value_ = lp::kInfinity;
  int nodes_ = 0;
  long iterations_ = 0;
};

std::optional<lp::LpSolution> BranchAndBound::solve_node(const std::vector<int>& fixed_zero,
                                                         const lp::BasisState* warm) {
  if (nodes_ >= options_.max_nodes) throw lp::LimitReached("node limit reached");
  ++nodes_;
  std::vector<double> saved;
  saved.reserve(fixed_zero.size());
  for (int j : fixed_zero) {
    saved.push_back(work_.columns[j].upper);
    work_.columns[j].upper = std::max(0.0, work_.columns[j].lower);
  }
  lp::LpSolution sol;
  auto options = simplex_;
  options.warm_start = warm != nullptr && !warm->status.empty() ? warm : nullptr;
  try {
    sol = lp::solve_lp(work_, options);
  } catch (...) {
    for (std::size_t k = 0; k < fixed_zero.size(); ++k) work_.columns[fixed_zero[k]].upper = saved[k];
    throw;
  }
  for (std::size_t k = 0; k < fixed_zero.size(); ++k) work_.columns[fixed_zero[k]].upper = saved[k];
  iterations_ += sol.iterations;
  if (sol.status == lp::LpStatus::kUnbounded) throw UnboundedModel("relaxation is unbounded");
  if (sol.status == lp::LpStatus::kInfeasible) return std::nullopt;
  tighten_free_slack(sol.values);
  return sol;
}

// Zero-cost pair members that sit in a single inequality row can be lowered
// to the least value that row allows without touching anything else.
void BranchAndBound::tighten_free_slack(std::vector<double>& x) const {
  const auto& lp = model_.lp;
  for (int j = 0; j < lp.num_columns(); ++j) {
    if (!in_pair_[j] || lp.columns[j].cost != 0.0 || rows_of_[j].size() != 1) continue;
    const double lower = lp.columns[j].lower;
    if (x[j] <= lower) continue;
    const auto& row = lp.rows[rows_of_[j].front()];
    if (row.relation == lp::Relation::kEqual) continue;
    double a = 0.0;
    double rest = 0.0;
    for (const auto& t : row.terms) {
      if (t.var == j) a += t.coef;
      else rest += t.coef * x[t.var];
    }
    // Orient as  a x_j + rest <= rhs.
    double rhs = row.rhs;
    if (row.relation == lp::Relation::kGreaterEqual) {
      a = -a;
      rest = -rest;
      rhs = -rhs;
    }
    double target = lower;
    if (a < 0.0) target = std::max(lower, (rest - rhs) / -a);
    x[j] = std::min(x[j], target);
  }
}

void BranchAndBound::offer(const std::vector<double>& x) {
  const double value = work_.objective(x);
  if (value < incumbent_value_) {
    incumbent_value_ = value;
    incumbent_ = x;
  }
}

// Repeatedly zero the smaller side of every violated pair and re-solve.
void BranchAndBound::dive(lp::LpSolution sol, std::vector<int> fixed) {
  for (int round = 0; round < 25; ++round) {
    bool any = false;
    for (const auto& p : model_.complementarity_pairs) {
      const double a = sol.values[p.first];
      const double b = sol.values[p.second];
      if (std::min(a, b) > options_.comp_tol) {
        fixed.push_back(a <= b ? p.first : p.second);
        any = true;
      }
    }
    if (!any) {
      offer(sol.values);
      return;
    }
    auto next = solve_node(fixed, &sol.basis);
    if (!next) return;
    sol = std::move(*next);
  }
}

DispatchSolution BranchAndBound::run() {
  DispatchSolution out;
  out.mode = model_.mode;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  bool limited = false;

  try {
    auto root = solve_node({});
    if (!root) {
      auto probe = lp::solve_lp(work_, simplex_);
      std::vector<std::string> names;
      for (int i : probe.infeasible_rows) names.push_back(model_.lp.rows[i].name);
      throw InfeasibleModel(fmt::format("model is infeasible ({} rows in the certificate)", names.size()), names);
    }
    auto branch = [&](const lp::LpSolution& sol, const std::vector<int>& fixed, int pair_index) {
      ++out.branched_nodes;
      const auto& pair = model_.complementarity_pairs[pair_index];
      auto basis = std::make_shared<const lp::BasisState>(sol.basis);
      for (int side : {pair.first, pair.second}) {
        Node child{sol.objective_value, next_id++, fixed, basis};
        child.fixed_zero.push_back(side);
        open.push(std::move(child));
      }
    };

    const auto root_worst = worst_pair(model_, root->values);
    out.root_clean = root_worst.amount <= options_.comp_tol;
    if (out.root_clean) {
      offer(root->values);
    } else {
      dive(*root, {});
      branch(*root, {}, root_worst.pair);
    }

    while (!open.empty()) {
      Node node = open.top();
      open.pop();
      if (node.bound >= incumbent_value_ - options_.opt_tol) continue;
      auto sol = solve_node(node.fixed_zero, node.basis.get());
      if (!sol || sol->objective_value >= incumbent_value_ - options_.opt_tol) continue;
      const auto worst = worst_pair(model_, sol->values);
      if (worst.amount <= options_.comp_tol) {
        offer(sol->values);
        continue;
      }
      branch(*sol, node.fixed_zero, worst.pair);
    }
  } catch (const lp::LimitReached&) {
    limited = true;
  }

  out.nodes = nodes_;
  out.lp_iterations = iterations_;
  if (!incumbent_) {
    throw SolverLimitError(fmt::format("search stopped after {} nodes without a complementarity-clean solution",
                                       nodes_));
  }
  out.status = limited ? SolveStatus::kLimit : SolveStatus::kOptimal;
  out.values = std::move(*incumbent_);
  out.objective = model_.lp.objective(out.values);
  out.best_bound = out.objective;
  if (limited) {
    double bound = incumbent_value_;
    while (!open.empty()) {
      bound = std::min(bound, open.top().bound);
      open.pop();
    }
    out.best_bound = std::min(out.objective, bound / cost_scale_);
  }
  for (int b = 0; b < model_.catalog.buildings(); ++b) out.buildings.push_back(extract_dispatch(model_, out.values, b));
  return out;
}

}  // namespace

DispatchSolution solve(const model::MilpModel& model, const SolverOptions& options, kernels::Backend backend) {
  BranchAndBound search(model, options, backend);
  return search.run();
}

}  // namespace temgrid::solver
