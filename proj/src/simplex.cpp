#include "temgrid/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <fmt/format.h>

#include "temgrid/basis_factor.hpp"

namespace temgrid::lp {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

NumericalBreakdown::NumericalBreakdown(const std::string& what, std::vector<PivotRecord> history)
    : Error(what), history_(std::move(history)) {}

namespace {

enum class VarStatus : unsigned char { kBasic, kAtLower, kAtUpper, kAtZero };

constexpr int kHistoryLength = 16;

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& program, const SimplexOptions& options);
  LpSolution run();

 private:
  enum class IterateResult { kOptimal, kUnbounded };

  enum class DualResult { kFeasible, kInfeasible, kGiveUp };

  // Returns true when `warm` was usable and no artificials were added.
  bool setup(const BasisState* warm);
  IterateResult iterate(const std::vector<double>& cost);
  DualResult dual_iterate(const std::vector<double>& cost);
  [[nodiscard]] bool primal_feasible() const;
  [[nodiscard]] bool dual_feasible(const std::vector<double>& cost) const;
  [[nodiscard]] BasisState export_basis() const;
  void refactor();
  void recompute_basic_values();
  void pivot(int q, int r, int leaving_status_dir, const std::vector<double>& alpha, double theta, double dir);
  void drive_out_artificials();
  void compute_duals(const std::vector<double>& cost, std::vector<double>& y) const;
  [[noreturn]] void breakdown(const std::string& what) const;
  void column_dense(int j, std::vector<double>& out) const;
  double nonbasic_value(int j) const;

  const LinearProgram& program_;
  SimplexOptions options_;
  int m_ = 0;
  int n_ = 0;      // structural columns
  int total_ = 0;  // structural + slack + artificial
  int first_artificial_ = 0;
  kernels::SparseMatrix matrix_;  // CSC over all columns
  std::vector<double> rhs_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<VarStatus> status_;
  std::vector<int> head_;         // basis position -> column
  std::vector<int> artificial_row_;
  std::vector<double> phase1_cost_;
  std::vector<double> phase2_cost_;
  BasisFactor factor_;
  long iterations_ = 0;
  long max_iterations_ = 0;
  std::deque<PivotRecord> history_;
  int unbounded_column_ = -1;
  double unbounded_dir_ = 0.0;
  std::vector<double> unbounded_alpha_;
  std::vector<int> farkas_rows_;
};

RevisedSimplex::RevisedSimplex(const LinearProgram& program, const SimplexOptions& options)
    : program_(program), options_(options) {
  m_ = program.num_rows();
  n_ = program.num_columns();
}

double RevisedSimplex::nonbasic_value(int j) const {
  if (std::isfinite(lower_[j])) return lower_[j];
  if (std::isfinite(upper_[j])) return upper_[j];
  return 0.0;
}

bool RevisedSimplex::setup(const BasisState* warm) {
  // Structural + slack columns, then (cold start only) one artificial per row
  // whose slack cannot absorb the initial residual.
  std::vector<std::vector<std::pair<int, double>>> cols(n_);
  for (int i = 0; i < m_; ++i) {
    for (const auto& t : program_.rows[i].terms) {
      if (t.coef != 0.0) cols[t.var].emplace_back(i, t.coef);
    }
  }
  lower_.clear();
  upper_.clear();
  for (const auto& c : program_.columns) {
    if (c.lower > c.upper) {
      throw DomainError(fmt::format("column {} has lower bound above upper bound", c.name));
    }
    lower_.push_back(c.lower);
    upper_.push_back(c.upper);
  }
  rhs_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    const auto& row = program_.rows[i];
    rhs_[i] = row.rhs;
    cols.push_back({{i, 1.0}});
    switch (row.relation) {
      case Relation::kLessEqual:
        lower_.push_back(0.0);
        upper_.push_back(kInfinity);
        break;
      case Relation::kGreaterEqual:
        lower_.push_back(-kInfinity);
        upper_.push_back(0.0);
        break;
      case Relation::kEqual:
        lower_.push_back(0.0);
        upper_.push_back(0.0);
        break;
    }
  }

  x_.assign(n_ + m_, 0.0);
  status_.assign(n_ + m_, VarStatus::kAtLower);
  for (int j = 0; j < n_ + m_; ++j) {
    x_[j] = nonbasic_value(j);
    status_[j] = std::isfinite(lower_[j]) ? VarStatus::kAtLower
                 : std::isfinite(upper_[j]) ? VarStatus::kAtUpper
                                            : VarStatus::kAtZero;
  }

  bool use_warm = warm != nullptr && warm->status.size() == static_cast<std::size_t>(n_ + m_) &&
                  std::count(warm->status.begin(), warm->status.end(), 0) == m_;
  head_.assign(m_, -1);
  first_artificial_ = n_ + m_;
  artificial_row_.clear();
  if (use_warm) {
    int pos = 0;
    for (int j = 0; j < n_ + m_; ++j) {
      const bool has_lower = std::isfinite(lower_[j]);
      const bool has_upper = std::isfinite(upper_[j]);
      switch (warm->status[j]) {
        case 0:
          status_[j] = VarStatus::kBasic;
          head_[pos++] = j;
          break;
        case 2:
          if (has_upper) {
            status_[j] = VarStatus::kAtUpper;
            x_[j] = upper_[j];
          }
          break;
        case 3:
          if (!has_lower && !has_upper) {
            status_[j] = VarStatus::kAtZero;
            x_[j] = 0.0;
          }
          break;
        default:
          break;
      }
    }
  }

  std::vector<double> residual = rhs_;
  for (int j = 0; j < n_ && !use_warm; ++j) {
    if (x_[j] == 0.0) continue;
    for (const auto& [i, a] : cols[j]) residual[i] -= a * x_[j];
  }

  for (int i = 0; i < m_ && !use_warm; ++i) {
    const int slack = n_ + i;
    const double r = residual[i];
    if (r >= lower_[slack] - options_.feas_tol && r <= upper_[slack] + options_.feas_tol) {
      head_[i] = slack;
      x_[slack] = r;
      status_[slack] = VarStatus::kBasic;
      continue;
    }
    const double bound = r < lower_[slack] ? lower_[slack] : upper_[slack];
    x_[slack] = bound;
    status_[slack] = bound == lower_[slack] ? VarStatus::kAtLower : VarStatus::kAtUpper;
    const double sigma = r - bound > 0.0 ? 1.0 : -1.0;
    cols.push_back({{i, sigma}});
    lower_.push_back(0.0);
    upper_.push_back(kInfinity);
    x_.push_back(std::fabs(r - bound));
    status_.push_back(VarStatus::kBasic);
    head_[i] = static_cast<int>(cols.size()) - 1;
    artificial_row_.push_back(i);
  }
  total_ = static_cast<int>(cols.size());

  matrix_.rows = m_;
  matrix_.cols = total_;
  matrix_.start.assign(1, 0);
  matrix_.index.clear();
  matrix_.value.clear();
  for (const auto& col : cols) {
    for (const auto& [i, a] : col) {
      matrix_.index.push_back(i);
      matrix_.value.push_back(a);
    }
    matrix_.start.push_back(static_cast<int>(matrix_.index.size()));
  }

  phase1_cost_.assign(total_, 0.0);
  for (int j = first_artificial_; j < total_; ++j) phase1_cost_[j] = 1.0;
  phase2_cost_.assign(total_, 0.0);
  for (int j = 0; j < n_; ++j) phase2_cost_[j] = program_.columns[j].cost;

  max_iterations_ = options_.max_iterations > 0 ? options_.max_iterations : 50L * (m_ + total_) + 1000;
  return use_warm;
}

bool RevisedSimplex::primal_feasible() const {
  for (int i = 0; i < m_; ++i) {
    const int j = head_[i];
    if (x_[j] < lower_[j] - options_.feas_tol || x_[j] > upper_[j] + options_.feas_tol) return false;
  }
  return true;
}

bool RevisedSimplex::dual_feasible(const std::vector<double>& cost) const {
  std::vector<double> y;
  std::vector<double> d(total_);
  compute_duals(cost, y);
  kernels::reduced_costs(options_.backend, matrix_, cost, y, d);
  const double tol = options_.opt_tol;
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::kBasic || !(lower_[j] < upper_[j])) continue;
    if (status_[j] == VarStatus::kAtLower && d[j] < -tol) return false;
    if (status_[j] == VarStatus::kAtUpper && d[j] > tol) return false;
    if (status_[j] == VarStatus::kAtZero && std::fabs(d[j]) > tol) return false;
  }
  return true;
}

BasisState RevisedSimplex::export_basis() const {
  BasisState basis;
  for (int i = 0; i < m_; ++i) {
    if (head_[i] >= first_artificial_) return basis;
  }
  basis.status.resize(n_ + m_);
  for (int j = 0; j < n_ + m_; ++j) {
    switch (status_[j]) {
      case VarStatus::kBasic: basis.status[j] = 0; break;
      case VarStatus::kAtLower: basis.status[j] = 1; break;
      case VarStatus::kAtUpper: basis.status[j] = 2; break;
      case VarStatus::kAtZero: basis.status[j] = 3; break;
    }
  }
  return basis;
}

// Bounded dual simplex from a dual feasible basis: the most infeasible basic
// variable leaves at its violated bound.
RevisedSimplex::DualResult RevisedSimplex::dual_iterate(const std::vector<double>& cost) {
  std::vector<double> y;
  std::vector<double> d(total_);
  std::vector<double> rho(m_);
  std::vector<double> alpha(m_);
  const double feas = options_.feas_tol;
  const long limit = iterations_ + 20L * m_ + 1000;
  for (;;) {
    if (++iterations_ > std::min(limit, max_iterations_)) return DualResult::kGiveUp;
    if (options_.deadline && (iterations_ & 63) == 0 && std::chrono::steady_clock::now() > *options_.deadline) {
      throw LimitReached("time limit reached inside the simplex");
    }
    if (factor_.updates() >= options_.refactor_interval) refactor();

    int r = -1;
    int dir = 0;
    double worst = feas;
    for (int i = 0; i < m_; ++i) {
      const int j = head_[i];
      if (lower_[j] - x_[j] > worst) {
        worst = lower_[j] - x_[j];
        r = i;
        dir = 1;
      } else if (x_[j] - upper_[j] > worst) {
        worst = x_[j] - upper_[j];
        r = i;
        dir = -1;
      }
    }
    if (r < 0) return DualResult::kFeasible;

    compute_duals(cost, y);
    kernels::reduced_costs(options_.backend, matrix_, cost, y, d);
    std::fill(rho.begin(), rho.end(), 0.0);
    rho[r] = 1.0;
    factor_.btran(rho);

    int q = -1;
    double best_ratio = kInfinity;
    double best_abs = 0.0;
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::kBasic || !(lower_[j] < upper_[j])) continue;
      double a = 0.0;
      for (int k = matrix_.start[j]; k < matrix_.start[j + 1]; ++k) a += rho[matrix_.index[k]] * matrix_.value[k];
      if (std::fabs(a) < options_.pivot_tol) continue;
      // The leaving variable moves by -a per unit increase of x_j.
      double slack_d = 0.0;
      if (status_[j] == VarStatus::kAtLower) {
        if (a * dir >= 0.0) continue;
        slack_d = std::max(d[j], 0.0);
      } else if (status_[j] == VarStatus::kAtUpper) {
        if (a * dir <= 0.0) continue;
        slack_d = std::max(-d[j], 0.0);
      } else {
        slack_d = std::fabs(d[j]);
      }
      const double ratio = slack_d / std::fabs(a);
      if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && std::fabs(a) > best_abs)) {
        best_ratio = ratio;
        best_abs = std::fabs(a);
        q = j;
      }
    }
    if (q < 0) {
      farkas_rows_.clear();
      for (int i = 0; i < m_; ++i) {
        if (std::fabs(rho[i]) > 1e-9) farkas_rows_.push_back(i);
      }
      return DualResult::kInfeasible;
    }

    column_dense(q, alpha);
    factor_.ftran(alpha);
    if (std::fabs(alpha[r]) < options_.pivot_tol) return DualResult::kGiveUp;
    const int leaving = head_[r];
    const double target = dir > 0 ? lower_[leaving] : upper_[leaving];
    const double theta = (x_[leaving] - target) / alpha[r];
    for (int i = 0; i < m_; ++i) {
      if (alpha[i] != 0.0) x_[head_[i]] -= theta * alpha[i];
    }
    x_[q] += theta;
    x_[leaving] = target;
    status_[leaving] = dir > 0 ? VarStatus::kAtLower : VarStatus::kAtUpper;
    head_[r] = q;
    status_[q] = VarStatus::kBasic;
    factor_.update(r, alpha);
    history_.push_back({iterations_, q, leaving, alpha[r], theta});
    if (history_.size() > kHistoryLength) history_.pop_front();
  }
}

void RevisedSimplex::column_dense(int j, std::vector<double>& out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (int k = matrix_.start[j]; k < matrix_.start[j + 1]; ++k) out[matrix_.index[k]] = matrix_.value[k];
}

void RevisedSimplex::breakdown(const std::string& what) const {
  throw NumericalBreakdown(what, std::vector<PivotRecord>(history_.begin(), history_.end()));
}

void RevisedSimplex::refactor() {
  if (!factor_.refactor(matrix_, head_)) breakdown("basis matrix is singular at refactorization");
  recompute_basic_values();
}

void RevisedSimplex::recompute_basic_values() {
  std::vector<double> r = rhs_;
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::kBasic || x_[j] == 0.0) continue;
    for (int k = matrix_.start[j]; k < matrix_.start[j + 1]; ++k) r[matrix_.index[k]] -= matrix_.value[k] * x_[j];
  }
  factor_.ftran(r);
  for (int i = 0; i < m_; ++i) x_[head_[i]] = r[i];
}

void RevisedSimplex::compute_duals(const std::vector<double>& cost, std::vector<double>& y) const {
  y.resize(m_);
  for (int i = 0; i < m_; ++i) y[i] = cost[head_[i]];
  factor_.btran(y);
}

void RevisedSimplex::pivot(int q, int r, int leaving_dir, const std::vector<double>& alpha, double theta,
                           double dir) {
  for (int i = 0; i < m_; ++i) {
    if (alpha[i] != 0.0) x_[head_[i]] -= dir * alpha[i] * theta;
  }
  x_[q] += dir * theta;
  const int leaving = head_[r];
  // Snap the leaving variable onto the bound it reached.
  if (leaving_dir < 0) {
    x_[leaving] = lower_[leaving];
    status_[leaving] = VarStatus::kAtLower;
  } else {
    x_[leaving] = upper_[leaving];
    status_[leaving] = VarStatus::kAtUpper;
  }
  head_[r] = q;
  status_[q] = VarStatus::kBasic;
  factor_.update(r, alpha);
}

RevisedSimplex::IterateResult RevisedSimplex::iterate(const std::vector<double>& cost) {
  std::vector<double> y;
  std::vector<double> d(total_);
  std::vector<double> score(total_);
  std::vector<double> alpha(m_);
  int degenerate_run = 0;
  bool bland = false;
  const double tol = options_.opt_tol;
  const double feas = options_.feas_tol;

  for (;;) {
    if (++iterations_ > max_iterations_) breakdown(fmt::format("iteration limit {} reached", max_iterations_));
    if (options_.deadline && (iterations_ & 63) == 0 && std::chrono::steady_clock::now() > *options_.deadline) {
      throw LimitReached("time limit reached inside the simplex");
    }
    if (factor_.updates() >= options_.refactor_interval) refactor();

    compute_duals(cost, y);
    kernels::reduced_costs(options_.backend, matrix_, cost, y, d);

    for (int j = 0; j < total_; ++j) {
      double s = 0.0;
      if (status_[j] != VarStatus::kBasic && lower_[j] < upper_[j]) {
        switch (status_[j]) {
          case VarStatus::kAtLower: s = d[j] < -tol ? -d[j] : 0.0; break;
          case VarStatus::kAtUpper: s = d[j] > tol ? d[j] : 0.0; break;
          case VarStatus::kAtZero: s = std::fabs(d[j]) > tol ? std::fabs(d[j]) : 0.0; break;
          case VarStatus::kBasic: break;
        }
      }
      score[j] = s;
    }
    int q = -1;
    if (bland) {
      for (int j = 0; j < total_; ++j) {
        if (score[j] > 0.0) {
          q = j;
          break;
        }
      }
    } else {
      q = kernels::argmax_positive(options_.backend, score);
    }
    if (q < 0) return IterateResult::kOptimal;

    const double dir = status_[q] == VarStatus::kAtUpper ? -1.0
                       : status_[q] == VarStatus::kAtLower ? 1.0
                                                           : (d[q] < 0.0 ? 1.0 : -1.0);
    column_dense(q, alpha);
    factor_.ftran(alpha);

    // Ratio test. Basic i moves at rate -dir * alpha_i per unit step.
    const double flip = upper_[q] - lower_[q];
    int r = -1;
    int r_dir = 0;
    double theta = kInfinity;
    if (!bland) {
      double theta_max = kInfinity;
      for (int i = 0; i < m_; ++i) {
        const double rate = -dir * alpha[i];
        if (std::fabs(alpha[i]) < options_.pivot_tol) continue;
        const int j = head_[i];
        if (rate < 0.0 && std::isfinite(lower_[j])) {
          theta_max = std::min(theta_max, (x_[j] - lower_[j] + feas) / -rate);
        } else if (rate > 0.0 && std::isfinite(upper_[j])) {
          theta_max = std::min(theta_max, (upper_[j] - x_[j] + feas) / rate);
        }
      }
      if (flip <= theta_max) {
        theta = flip;
      } else if (std::isfinite(theta_max)) {
        double best_alpha = 0.0;
        for (int i = 0; i < m_; ++i) {
          const double rate = -dir * alpha[i];
          if (std::fabs(alpha[i]) < options_.pivot_tol) continue;
          const int j = head_[i];
          double t = kInfinity;
          int side = 0;
          if (rate < 0.0 && std::isfinite(lower_[j])) {
            t = (x_[j] - lower_[j]) / -rate;
            side = -1;
          } else if (rate > 0.0 && std::isfinite(upper_[j])) {
            t = (upper_[j] - x_[j]) / rate;
            side = 1;
          }
          if (side != 0 && t <= theta_max && std::fabs(alpha[i]) > best_alpha) {
            best_alpha = std::fabs(alpha[i]);
            r = i;
            r_dir = side;
            theta = std::max(t, 0.0);
          }
        }
      }
    } else {
      for (int i = 0; i < m_; ++i) {
        const double rate = -dir * alpha[i];
        if (std::fabs(alpha[i]) < options_.pivot_tol) continue;
        const int j = head_[i];
        double t = kInfinity;
        int side = 0;
        if (rate < 0.0 && std::isfinite(lower_[j])) {
          t = std::max((x_[j] - lower_[j]) / -rate, 0.0);
          side = -1;
        } else if (rate > 0.0 && std::isfinite(upper_[j])) {
          t = std::max((upper_[j] - x_[j]) / rate, 0.0);
          side = 1;
        }
        if (side == 0) continue;
        if (t < theta - 1e-12 || (t <= theta + 1e-12 && r >= 0 && j < head_[r])) {
          theta = t;
          r = i;
          r_dir = side;
        }
      }
      if (flip <= theta) {
        theta = flip;
        r = -1;
      }
    }

    if (r < 0 && !std::isfinite(theta)) {
      unbounded_column_ = q;
      unbounded_dir_ = dir;
      unbounded_alpha_ = alpha;
      return IterateResult::kUnbounded;
    }

    PivotRecord rec{iterations_, q, r >= 0 ? head_[r] : q, r >= 0 ? alpha[r] : 0.0, theta};
    history_.push_back(rec);
    if (history_.size() > kHistoryLength) history_.pop_front();

    if (r < 0) {
      // Bound flip: the entering variable runs to its opposite bound.
      for (int i = 0; i < m_; ++i) {
        if (alpha[i] != 0.0) x_[head_[i]] -= dir * alpha[i] * theta;
      }
      if (dir > 0.0) {
        x_[q] = upper_[q];
        status_[q] = VarStatus::kAtUpper;
      } else {
        x_[q] = lower_[q];
        status_[q] = VarStatus::kAtLower;
      }
    } else {
      pivot(q, r, r_dir, alpha, theta, dir);
    }

    if (theta <= 1e-12) {
      if (++degenerate_run >= options_.degenerate_limit) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

void RevisedSimplex::drive_out_artificials() {
  std::vector<double> rho(m_);
  std::vector<double> alpha(m_);
  for (int r = 0; r < m_; ++r) {
    if (head_[r] < first_artificial_) continue;
    std::fill(rho.begin(), rho.end(), 0.0);
    rho[r] = 1.0;
    factor_.btran(rho);
    int best = -1;
    double best_value = 1e-7;
    bool best_free = false;
    for (int j = 0; j < first_artificial_; ++j) {
      if (status_[j] == VarStatus::kBasic) continue;
      double a = 0.0;
      for (int k = matrix_.start[j]; k < matrix_.start[j + 1]; ++k) a += rho[matrix_.index[k]] * matrix_.value[k];
      const bool movable = lower_[j] < upper_[j];
      // Prefer movable columns; fixed ones only when nothing else pivots.
      if ((movable && !best_free && std::fabs(a) > 1e-7) || ((movable == best_free) && std::fabs(a) > best_value)) {
        best = j;
        best_value = std::fabs(a);
        best_free = movable;
      }
    }
    if (best < 0) continue;  // redundant row; the artificial stays basic at zero
    column_dense(best, alpha);
    factor_.ftran(alpha);
    const int leaving = head_[r];
    x_[leaving] = 0.0;
    status_[leaving] = VarStatus::kAtLower;
    head_[r] = best;
    status_[best] = VarStatus::kBasic;
    factor_.update(r, alpha);
    if (factor_.updates() >= options_.refactor_interval) refactor();
  }
}

LpSolution RevisedSimplex::run() {
  LpSolution sol;
  bool warm = setup(options_.warm_start);
  if (warm && !factor_.refactor(matrix_, head_)) warm = false;
  if (warm) {
    recompute_basic_values();
    if (!primal_feasible()) {
      const auto result = dual_feasible(phase2_cost_) ? dual_iterate(phase2_cost_) : DualResult::kGiveUp;
      if (result == DualResult::kInfeasible) {
        sol.status = LpStatus::kInfeasible;
        sol.infeasible_rows = farkas_rows_;
        sol.iterations = static_cast<int>(iterations_);
        sol.values.assign(x_.begin(), x_.begin() + n_);
        return sol;
      }
      if (result == DualResult::kGiveUp) warm = false;
    }
  }
  if (!warm) {
    setup(nullptr);
    if (!factor_.refactor(matrix_, head_)) breakdown("initial basis is singular");
  }

  if (total_ > first_artificial_) {
    iterate(phase1_cost_);
    refactor();
    double worst = 0.0;
    for (int j = first_artificial_; j < total_; ++j) worst = std::max(worst, x_[j]);
    if (worst > options_.feas_tol) {
      sol.status = LpStatus::kInfeasible;
      for (int j = first_artificial_; j < total_; ++j) {
        if (x_[j] > options_.feas_tol) sol.infeasible_rows.push_back(artificial_row_[j - first_artificial_]);
      }
      std::sort(sol.infeasible_rows.begin(), sol.infeasible_rows.end());
      sol.iterations = static_cast<int>(iterations_);
      sol.values.assign(x_.begin(), x_.begin() + n_);
      return sol;
    }
    drive_out_artificials();
    for (int j = first_artificial_; j < total_; ++j) {
      upper_[j] = 0.0;
      if (status_[j] != VarStatus::kBasic) {
        x_[j] = 0.0;
        status_[j] = VarStatus::kAtLower;
      }
    }
    refactor();
  }

  if (iterate(phase2_cost_) == IterateResult::kUnbounded) {
    sol.status = LpStatus::kUnbounded;
    sol.unbounded_ray.assign(n_, 0.0);
    if (unbounded_column_ < n_) sol.unbounded_ray[unbounded_column_] = unbounded_dir_;
    for (int i = 0; i < m_; ++i) {
      if (head_[i] < n_) sol.unbounded_ray[head_[i]] = -unbounded_dir_ * unbounded_alpha_[i];
    }
    sol.iterations = static_cast<int>(iterations_);
    sol.values.assign(x_.begin(), x_.begin() + n_);
    return sol;
  }

  refactor();
  std::vector<double> y;
  compute_duals(phase2_cost_, y);
  std::vector<double> d(total_);
  kernels::reduced_costs(options_.backend, matrix_, phase2_cost_, y, d);

  sol.status = LpStatus::kOptimal;
  sol.values.assign(x_.begin(), x_.begin() + n_);
  // Nonbasic values sit exactly on bounds; clip basic drift inside them.
  for (int j = 0; j < n_; ++j) {
    const double v = sol.values[j];
    if (v < lower_[j] && v > lower_[j] - options_.feas_tol) sol.values[j] = lower_[j];
    if (v > upper_[j] && v < upper_[j] + options_.feas_tol) sol.values[j] = upper_[j];
  }
  sol.dual_values = y;
  sol.reduced_costs.assign(d.begin(), d.begin() + n_);
  sol.objective_value = program_.objective(sol.values);
  sol.iterations = static_cast<int>(iterations_);
  sol.basis = export_basis();
  return sol;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& program, const SimplexOptions& options) {
  if (program.num_rows() == 0) {
    // Every column independently at its cheapest bound.
    LpSolution sol;
    sol.values.resize(program.num_columns());
    sol.reduced_costs.resize(program.num_columns());
    for (int j = 0; j < program.num_columns(); ++j) {
      const auto& c = program.columns[j];
      sol.reduced_costs[j] = c.cost;
      double v = c.cost > 0.0 ? c.lower : c.cost < 0.0 ? c.upper : (std::isfinite(c.lower) ? c.lower : std::isfinite(c.upper) ? c.upper : 0.0);
      if (!std::isfinite(v)) {
        sol.status = LpStatus::kUnbounded;
        sol.unbounded_ray.assign(program.num_columns(), 0.0);
        sol.unbounded_ray[j] = c.cost > 0.0 ? -1.0 : 1.0;
        return sol;
      }
      sol.values[j] = v;
    }
    sol.objective_value = program.objective(sol.values);
    return sol;
  }
  RevisedSimplex simplex(program, options);
  return simplex.run();
}

double dual_bound(const LinearProgram& program, std::span<const double> duals, double tol) {
  double bound = program.objective_constant;
  std::vector<double> d(program.num_columns());
  for (int j = 0; j < program.num_columns(); ++j) d[j] = program.columns[j].cost;
  for (int i = 0; i < program.num_rows(); ++i) {
    const auto& row = program.rows[i];
    const double y = duals[i];
    bound += y * row.rhs;
    for (const auto& t : row.terms) d[t.var] -= y * t.coef;
    // Slack s_i in a x + s = b has cost 0 and reduced cost -y.
    if (row.relation == Relation::kLessEqual && y > tol) return -kInfinity;
    if (row.relation == Relation::kGreaterEqual && y < -tol) return -kInfinity;
  }
  for (int j = 0; j < program.num_columns(); ++j) {
    const auto& c = program.columns[j];
    if (d[j] > 0.0) {
      if (std::isfinite(c.lower)) bound += d[j] * c.lower;
      else if (d[j] > tol) return -kInfinity;
    } else if (d[j] < 0.0) {
      if (std::isfinite(c.upper)) bound += d[j] * c.upper;
      else if (d[j] < -tol) return -kInfinity;
    }
  }
  return bound;
}

}  // namespace temgrid::lp
