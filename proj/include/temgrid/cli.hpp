#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "temgrid/domain.hpp"

namespace temgrid::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitSolverLimit = 2,
  kExitIo = 3,
  kExitInternal = 4,  // verification failure or unexpected error
};

struct RunConfig {
  std::filesystem::path scenario_path;
  std::vector<RunMode> modes{RunMode::kBaseline, RunMode::kIndividual, RunMode::kCommunity};
  std::filesystem::path output_dir{"out"};
  std::optional<std::uint64_t> seed;  // replaces every EV sampling seed in the document
  std::optional<double> comp_tol;
  std::optional<double> feas_tol;
  std::optional<double> time_limit_seconds;
  std::optional<CompensationMode> compensation;
  std::optional<TerminalSoc> terminal_soc;
  bool eq2_verbatim = false;
};

// Loads the scenario named by `config` and applies its overrides. Throws the
// same errors as io::load_scenario.
CommunityScenario load_configured(const RunConfig& config);

// Full pipeline for `temgrid run`; writes costs.txt, costs.json,
// dispatch_<mode>.csv and prices.csv into config.output_dir.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to a subcommand.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace temgrid::cli
