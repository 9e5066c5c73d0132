#include "temgrid/tariff_engine.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace temgrid::tariff {

namespace {
void require_ratio(double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw DomainError(fmt::format("surplus ratio {} outside [0, 1]", ratio));
}
}  // namespace

double surplus_ratio(double total_deficit_kw, double total_surplus_kw, RatioFormula formula) {
  if (!(total_deficit_kw >= 0.0) || !(total_surplus_kw >= 0.0)) {
    throw DomainError(fmt::format("surplus_ratio needs nonnegative totals, got deficit={} surplus={}",
                                  total_deficit_kw, total_surplus_kw));
  }
  const double denominator =
      formula == RatioFormula::kAsWritten ? total_deficit_kw - total_surplus_kw : total_deficit_kw;
  if (denominator <= 0.0) return 1.0;
  return std::clamp(total_surplus_kw / denominator, 0.0, 1.0);
}

double export_tariff(double ratio, double grid_use, double grid_import, double grid_export) {
  require_ratio(ratio);
  return (1.0 - ratio) * (grid_use - grid_import) + ratio * grid_export;
}

double import_tariff(double ratio, double grid_use, double grid_import, double community_export) {
  require_ratio(ratio);
  return grid_import + ratio * (grid_use - community_export - grid_import);
}

std::vector<double> total_deficit_kw(const CommunityScenario& scenario) {
  std::vector<double> total(scenario.time.steps, 0.0);
  for (const auto& b : scenario.buildings) {
    for (int h = 0; h < scenario.time.steps; ++h) total[h] += b.net_load.deficit_kw.at(h);
  }
  return total;
}

std::vector<double> total_surplus_kw(const CommunityScenario& scenario) {
  std::vector<double> total(scenario.time.steps, 0.0);
  for (const auto& b : scenario.buildings) {
    for (int h = 0; h < scenario.time.steps; ++h) total[h] += b.net_load.surplus_kw.at(h);
  }
  return total;
}

CommunityPrices price_community(const CommunityScenario& scenario) {
  const int steps = scenario.time.steps;
  const auto deficit = total_deficit_kw(scenario);
  const auto surplus = total_surplus_kw(scenario);
  const auto& tb = scenario.tariffs;

  CommunityPrices prices;
  prices.surplus_ratio.resize(steps);
  prices.export_eur_per_kwh.resize(steps);
  prices.import_eur_per_kwh.resize(steps);
  for (int h = 0; h < steps; ++h) {
    const double ratio = surplus_ratio(deficit[h], surplus[h], scenario.options.ratio_formula);
    const double c_ec = export_tariff(ratio, tb.grid_use_eur_per_kwh.at(h), tb.grid_import_eur_per_kwh.at(h),
                                      tb.grid_export_eur_per_kwh.at(h));
    prices.surplus_ratio[h] = ratio;
    prices.export_eur_per_kwh[h] = c_ec;
    prices.import_eur_per_kwh[h] =
        import_tariff(ratio, tb.grid_use_eur_per_kwh[h], tb.grid_import_eur_per_kwh[h], c_ec);
  }
  return prices;
}

double weighted_mean(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) return 0.0;
  if (weights.size() != values.size()) throw DomainError("weighted_mean: size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    num += values[i] * weights[i];
    den += weights[i];
  }
  if (den <= 0.0) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
  }
  return num / den;
}

double CommunityPrices::weighted_export(std::span<const double> weights) const {
  return weighted_mean(export_eur_per_kwh, weights);
}

double CommunityPrices::weighted_import(std::span<const double> weights) const {
  return weighted_mean(import_eur_per_kwh, weights);
}

}  // namespace temgrid::tariff
