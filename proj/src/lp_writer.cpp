#include "temgrid/lp_writer.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

namespace temgrid::model {

namespace {

constexpr std::size_t kMaxLine = 200;

class LineWriter {
 public:
  LineWriter(std::ostream& out, std::string head) : out_(out), line_(std::move(head)) {}
  void term(double coef, const std::string& name) {
    std::string piece = fmt::format(" {} {} {}", coef < 0.0 ? '-' : '+', std::fabs(coef), name);
    if (line_.size() + piece.size() > kMaxLine) {
      out_ << line_ << '\n';
      line_ = "   ";
    }
    line_ += piece;
  }
  void finish(const std::string& tail) { out_ << line_ << tail << '\n'; }

 private:
  std::ostream& out_;
  std::string line_;
};

std::string bound_text(double value) {
  if (value == lp::kInfinity) return "+infinity";
  if (value == -lp::kInfinity) return "-infinity";
  return fmt::format("{}", value);
}

}  // namespace

void write_lp(std::ostream& out, const lp::LinearProgram& program, std::span<const ComplementarityPair> sos_pairs) {
  out << fmt::format("\\ {} columns, {} rows, {} complementarity pairs\n", program.num_columns(),
                     program.num_rows(), sos_pairs.size());
  out << fmt::format("\\ objective constant: {}\n", program.objective_constant);
  out << "Minimize\n";
  LineWriter obj(out, " obj:");
  bool any = false;
  for (const auto& c : program.columns) {
    if (c.cost != 0.0) {
      obj.term(c.cost, c.name);
      any = true;
    }
  }
  if (!any && !program.columns.empty()) obj.term(0.0, program.columns.front().name);
  obj.finish("");

  out << "Subject To\n";
  for (const auto& row : program.rows) {
    LineWriter w(out, fmt::format(" {}:", row.name));
    for (const auto& t : row.terms) w.term(t.coef, program.columns[t.var].name);
    const char* rel = row.relation == lp::Relation::kLessEqual ? "<=" : row.relation == lp::Relation::kEqual ? "=" : ">=";
    w.finish(fmt::format(" {} {}", rel, row.rhs));
  }

  out << "Bounds\n";
  for (const auto& c : program.columns) {
    if (c.lower == c.upper) {
      out << fmt::format(" {} = {}\n", c.name, c.lower);
    } else if (c.lower == -lp::kInfinity && c.upper == lp::kInfinity) {
      out << fmt::format(" {} free\n", c.name);
    } else if (!(c.lower == 0.0 && c.upper == lp::kInfinity)) {
      out << fmt::format(" {} <= {} <= {}\n", bound_text(c.lower), c.name, bound_text(c.upper));
    }
  }

  if (!sos_pairs.empty()) {
    out << "SOS\n";
    for (std::size_t k = 0; k < sos_pairs.size(); ++k) {
      out << fmt::format(" cp{}: S1:: {}:1 {}:2\n", k, program.columns[sos_pairs[k].first].name,
                         program.columns[sos_pairs[k].second].name);
    }
  }
  out << "End\n";
}

void write_lp(std::ostream& out, const MilpModel& model, bool include_complementarity) {
  if (include_complementarity) {
    write_lp(out, model.lp, model.complementarity_pairs);
  } else {
    write_lp(out, model.lp);
  }
}

}  // namespace temgrid::model
