#pragma once

#include <ostream>
#include <span>

#include "temgrid/linear_program.hpp"
#include "temgrid/model_builder.hpp"

namespace temgrid::model {

// Writes CPLEX-style LP text. Complementarity pairs, when given, become
// two-member SOS1 sets; the objective constant is emitted as a comment.
void write_lp(std::ostream& out, const lp::LinearProgram& program,
              std::span<const ComplementarityPair> sos_pairs = {});

// include_complementarity = false dumps the LP relaxation only.
void write_lp(std::ostream& out, const MilpModel& model, bool include_complementarity = true);

}  // namespace temgrid::model
