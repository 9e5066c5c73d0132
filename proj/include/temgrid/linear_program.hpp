#pragma once

#include <limits>
#include <string>
#include <vector>

namespace temgrid::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

// Constraint family tag; lets verification report residuals per group.
enum class RowFamily {
  kGeneric,
  kPowerBalance,
  kEvTotalCharge,
  kEvDischargeCap,
  kEvPrefix,
  kEvIdle,
  kSocRecursion,
  kSocHeadroom,
  kSocTerminal,
  kCommunityCap,
  kCommunityBalance,
};

const char* to_string(RowFamily family);

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  RowFamily family = RowFamily::kGeneric;
};

struct Column {
  std::string name;
  double cost = 0.0;
  double lower = 0.0;
  double upper = kInfinity;
};

// minimize  constant + sum_j cost_j x_j
// s.t.      rows, lower_j <= x_j <= upper_j
struct LinearProgram {
  std::vector<Column> columns;
  std::vector<Row> rows;
  double objective_constant = 0.0;

  int add_column(std::string name, double cost, double lower, double upper);
  int add_row(Row row);

  [[nodiscard]] int num_columns() const { return static_cast<int>(columns.size()); }
  [[nodiscard]] int num_rows() const { return static_cast<int>(rows.size()); }
  [[nodiscard]] double objective(const std::vector<double>& x) const;
  [[nodiscard]] double activity(const Row& row, const std::vector<double>& x) const;
};

}  // namespace temgrid::lp
