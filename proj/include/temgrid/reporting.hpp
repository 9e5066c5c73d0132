#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "temgrid/domain.hpp"
#include "temgrid/solver.hpp"
#include "temgrid/tariff_engine.hpp"

namespace temgrid::report {

class ReportError : public Error {
 public:
  using Error::Error;
};

struct Costs {
  double electricity_eur = 0.0;
  double ev_revenue_eur = 0.0;
  double objective_eur = 0.0;  // electricity - ev revenue
};

struct ModeCosts {
  RunMode mode = RunMode::kBaseline;
  std::vector<Costs> buildings;
  Costs total;
  double solver_objective_eur = 0.0;
  solver::SolveStatus status = solver::SolveStatus::kOptimal;
};

struct CostBreakdown {
  std::vector<std::string> building_names;
  std::vector<double> baseline_electricity_eur;  // per building
  double baseline_electricity_total_eur = 0.0;
  std::vector<ModeCosts> modes;  // in the order supplied
  double mean_export_tariff_eur_per_kwh = 0.0;  // surplus-weighted
  double mean_import_tariff_eur_per_kwh = 0.0;  // deficit-weighted

  [[nodiscard]] const ModeCosts* find(RunMode mode) const;
  // 100 * (reference - value) / |reference|; empty when either side is absent
  // or the reference is zero.
  [[nodiscard]] std::optional<double> electricity_saving_vs_baseline(RunMode mode) const;
  [[nodiscard]] std::optional<double> objective_saving_vs_baseline(RunMode mode) const;
  [[nodiscard]] std::optional<double> electricity_saving_vs_individual() const;
  [[nodiscard]] std::optional<double> objective_saving_vs_individual() const;
};

// Electricity cost and EV revenue recomputed from the dispatch alone.
Costs building_costs(const CommunityScenario& scenario, const tariff::CommunityPrices& prices, RunMode mode,
                     const solver::DispatchSolution& solution, int building);

// Recomputes every cost from dispatch and checks the total against the
// solver objective (tolerance 1e-6, scaled up for large objectives).
CostBreakdown summarize(const CommunityScenario& scenario, const tariff::CommunityPrices& prices,
                        const std::vector<const solver::DispatchSolution*>& solutions);

// Grid exchange after storage, EVs and community trade (positive = import).
std::vector<double> net_grid_kw(const CommunityScenario& scenario, const solver::BuildingDispatch& d, int building);

void export_dispatch_csv(std::ostream& out, const CommunityScenario& scenario, const solver::DispatchSolution& solution);
void export_prices_csv(std::ostream& out, const tariff::CommunityPrices& prices);
void write_cost_table(std::ostream& out, const CostBreakdown& costs);
nlohmann::json cost_json(const CostBreakdown& costs);

// Fixed-point text without a negative zero.
std::string fixed(double value, int decimals);

}  // namespace temgrid::report
