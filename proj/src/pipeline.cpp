#include "temgrid/pipeline.hpp"

#include <chrono>
#include <exception>

namespace temgrid {

PipelineResult run_pipeline(const CommunityScenario& scenario, const std::vector<RunMode>& modes,
                            kernels::Backend backend, bool parallel) {
  if (modes.empty()) throw DomainError("no run modes requested");
  PipelineResult result;
  result.prices = tariff::price_community(scenario);
  const int count = static_cast<int>(modes.size());
  result.runs.resize(modes.size());
  std::vector<std::exception_ptr> errors(modes.size());

#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (int k = 0; k < count; ++k) {
    try {
      const auto start = std::chrono::steady_clock::now();
      ModeRun& run = result.runs[k];
      run.mode = modes[k];
      run.model = model::build(scenario, result.prices, run.mode);
      run.solution = solver::solve(run.model, scenario.options.solver, backend);
      run.verification = solver::verify(run.model, run.solution.values);
      run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<const solver::DispatchSolution*> solutions;
  for (const auto& run : result.runs) solutions.push_back(&run.solution);
  result.costs = report::summarize(scenario, result.prices, solutions);
  return result;
}

}  // namespace temgrid
