#include "temgrid/linear_program.hpp"

#include <stdexcept>

namespace temgrid::lp {

const char* to_string(RowFamily family) {
  switch (family) {
    case RowFamily::kGeneric: return "generic";
    case RowFamily::kPowerBalance: return "power-balance";
    case RowFamily::kEvTotalCharge: return "ev-total-charge";
    case RowFamily::kEvDischargeCap: return "ev-discharge-cap";
    case RowFamily::kEvPrefix: return "ev-prefix";
    case RowFamily::kEvIdle: return "ev-idle";
    case RowFamily::kSocRecursion: return "soc-recursion";
    case RowFamily::kSocHeadroom: return "soc-headroom";
    case RowFamily::kSocTerminal: return "soc-terminal";
    case RowFamily::kCommunityCap: return "community-cap";
    case RowFamily::kCommunityBalance: return "community-balance";
  }
  return "unknown";
}

int LinearProgram::add_column(std::string name, double cost, double lower, double upper) {
  columns.push_back({std::move(name), cost, lower, upper});
  return num_columns() - 1;
}

int LinearProgram::add_row(Row row) {
  for (const auto& t : row.terms) {
    if (t.var < 0 || t.var >= num_columns()) throw std::out_of_range("row references unknown column: " + row.name);
  }
  rows.push_back(std::move(row));
  return num_rows() - 1;
}

double LinearProgram::objective(const std::vector<double>& x) const {
  double total = objective_constant;
  for (int j = 0; j < num_columns(); ++j) total += columns[j].cost * x[j];
  return total;
}

double LinearProgram::activity(const Row& row, const std::vector<double>& x) const {
  double total = 0.0;
  for (const auto& t : row.terms) total += t.coef * x[t.var];
  return total;
}

}  // namespace temgrid::lp
