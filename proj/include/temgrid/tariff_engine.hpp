#pragma once

#include <span>
#include <vector>

#include "temgrid/domain.hpp"

namespace temgrid::tariff {

// Per-step community exchange tariffs, EUR/kWh. Export tariff is negative
// when exporting earns income.
struct CommunityPrices {
  std::vector<double> surplus_ratio;
  std::vector<double> export_eur_per_kwh;
  std::vector<double> import_eur_per_kwh;

  // Weighted daily means; fall back to the plain mean when all weights are 0.
  [[nodiscard]] double weighted_export(std::span<const double> weights) const;
  [[nodiscard]] double weighted_import(std::span<const double> weights) const;
};

// Share of community surplus against the net community deficit, clamped to
// [0, 1]. A nonpositive denominator yields 1.
double surplus_ratio(double total_deficit_kw, double total_surplus_kw,
                     RatioFormula formula = RatioFormula::kAsWritten);

// Interpolates between (grid_use - grid_import) at ratio 0 and grid_export
// at ratio 1.
double export_tariff(double ratio, double grid_use, double grid_import, double grid_export);

// grid_import + ratio * (grid_use - community_export - grid_import)
double import_tariff(double ratio, double grid_use, double grid_import, double community_export);

CommunityPrices price_community(const CommunityScenario& scenario);

// Per-step totals over buildings, used as pricing inputs and as weights.
std::vector<double> total_deficit_kw(const CommunityScenario& scenario);
std::vector<double> total_surplus_kw(const CommunityScenario& scenario);

double weighted_mean(std::span<const double> values, std::span<const double> weights);

}  // namespace temgrid::tariff
