#include <algorithm>
#include <cmath>

#include "temgrid/solver.hpp"

namespace temgrid::solver {

std::vector<std::string> VerificationReport::flagged(double tol, double comp_tol) const {
  if (comp_tol < 0.0) comp_tol = tol;
  std::vector<std::string> out;
  for (const auto& [family, residual] : row_residual) {
    if (!(residual <= tol)) out.emplace_back(lp::to_string(family));
  }
  if (!(bound_violation <= tol)) out.emplace_back("bounds");
  if (!(complementarity <= comp_tol)) out.emplace_back("complementarity");
  return out;
}

double VerificationReport::residual(lp::RowFamily family) const {
  auto it = row_residual.find(family);
  return it == row_residual.end() ? 0.0 : it->second;
}

VerificationReport verify(const model::MilpModel& model, const std::vector<double>& values) {
  const auto& lp = model.lp;
  if (values.size() != static_cast<std::size_t>(lp.num_columns())) {
    throw DomainError("solution length does not match the model");
  }
  VerificationReport report;
  for (const auto& row : lp.rows) {
    const double act = lp.activity(row, values);
    double residual = 0.0;
    switch (row.relation) {
      case lp::Relation::kLessEqual: residual = std::max(0.0, act - row.rhs); break;
      case lp::Relation::kGreaterEqual: residual = std::max(0.0, row.rhs - act); break;
      case lp::Relation::kEqual: residual = std::fabs(act - row.rhs); break;
    }
    if (!std::isfinite(act)) residual = lp::kInfinity;
    auto& slot = report.row_residual[row.family];
    slot = std::max(slot, residual);
  }
  for (int j = 0; j < lp.num_columns(); ++j) {
    const auto& c = lp.columns[j];
    const double v = values[j];
    double excess = std::max({0.0, c.lower - v, v - c.upper});
    if (!std::isfinite(v)) excess = lp::kInfinity;
    report.bound_violation = std::max(report.bound_violation, excess);
  }
  report.complementarity = worst_pair(model, values).amount;
  return report;
}

}  // namespace temgrid::solver
