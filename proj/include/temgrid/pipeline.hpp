#pragma once

#include <vector>

#include "temgrid/domain.hpp"
#include "temgrid/kernels.hpp"
#include "temgrid/model_builder.hpp"
#include "temgrid/reporting.hpp"
#include "temgrid/solver.hpp"
#include "temgrid/tariff_engine.hpp"

namespace temgrid {

struct ModeRun {
  RunMode mode = RunMode::kBaseline;
  model::MilpModel model;
  solver::DispatchSolution solution;
  solver::VerificationReport verification;
  double seconds = 0.0;
};

struct PipelineResult {
  tariff::CommunityPrices prices;
  std::vector<ModeRun> runs;  // same order as the requested modes
  report::CostBreakdown costs;
};

// price -> build -> solve -> verify -> summarize. Modes are solved
// concurrently when `parallel` is set; results do not depend on it.
PipelineResult run_pipeline(const CommunityScenario& scenario, const std::vector<RunMode>& modes,
                            kernels::Backend backend = kernels::Backend::kOpenMP, bool parallel = true);

}  // namespace temgrid
