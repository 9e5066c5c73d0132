#include "random_scenarios.hpp"

#include <algorithm>
#include <string>

namespace testsupport {

using temgrid::BatterySpec;
using temgrid::BuildingAssets;
using temgrid::CommunityScenario;
using temgrid::EVSession;
using temgrid::NetLoadSeries;
using temgrid::TariffBook;

namespace {
double uniform(std::mt19937_64& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}
int uniform_int(std::mt19937_64& gen, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
}  // namespace

TariffBook random_tariffs(std::mt19937_64& gen, int steps, bool strict_spread) {
  TariffBook tb;
  for (int h = 0; h < steps; ++h) {
    const double c_ig = uniform(gen, 0.06, 0.25);
    const double c_g = uniform(gen, 0.0, std::min(0.06, c_ig - 0.002));
    const double room = c_ig - c_g - (strict_spread ? 0.001 : 0.0);
    const double c_eg = -uniform(gen, 0.0, room);
    tb.grid_import_eur_per_kwh.push_back(c_ig);
    tb.grid_use_eur_per_kwh.push_back(c_g);
    tb.grid_export_eur_per_kwh.push_back(c_eg);
    tb.charge_eur_per_hour.push_back(uniform(gen, 0.5, 3.0));
    tb.discharge_eur_per_hour.push_back(-uniform(gen, 0.5, 4.0));
  }
  tb.parking_eur_per_hour = uniform(gen, 0.0, 1.0);
  tb.flexibility_eur_per_hour = -uniform(gen, 0.0, 1.0);
  return tb;
}

CommunityScenario random_scenario(std::mt19937_64& gen, const RandomScenarioConfig& config) {
  CommunityScenario sc;
  sc.time = {1.0, config.steps, 0.0};
  sc.tariffs = random_tariffs(gen, config.steps, config.force_overlap);
  const int overlap_step = uniform_int(gen, 0, config.steps - 1);

  for (int b = 0; b < config.buildings; ++b) {
    BuildingAssets building;
    building.name = "b" + std::to_string(b);
    std::vector<double> net(static_cast<std::size_t>(config.steps));
    for (auto& v : net) v = uniform(gen, -60.0, 60.0);
    if (config.force_overlap && config.buildings >= 2) {
      if (b == 0) net[overlap_step] = -uniform(gen, 150.0, 250.0);
      if (b == 1) net[overlap_step] = uniform(gen, 150.0, 250.0);
    }
    building.net_load = NetLoadSeries::from_signed(net);

    if (config.with_batteries) {
      BatterySpec bat;
      bat.capacity_kwh = uniform(gen, 10.0, 100.0);
      bat.max_charge_kw = uniform(gen, 5.0, 45.0);
      bat.max_discharge_kw = uniform(gen, 5.0, 45.0);
      bat.one_way_efficiency = uniform(gen, 0.85, 1.0);
      bat.soc_min = uniform(gen, 0.0, 0.3);
      bat.soc_max = uniform(gen, 0.7, 1.0);
      bat.soc_initial = uniform(gen, bat.soc_min, bat.soc_max);
      building.battery = bat;
    }

    const int sessions = uniform_int(gen, 0, config.max_sessions_per_building);
    for (int n = 0; n < sessions; ++n) {
      EVSession s;
      s.id = "ev" + std::to_string(n);
      const int window = uniform_int(gen, 1, config.steps);
      s.arrival_step = uniform_int(gen, 0, config.steps - window);
      // Quarter-hour durations with at least one idle-capable hour.
      s.parking_hours = std::max(0.25, window - 0.25 * uniform_int(gen, 0, 3));
      s.requested_charge_hours = 0.25 * uniform_int(gen, 0, static_cast<int>(s.parking_hours * 2.0));
      const double room = s.parking_hours - s.requested_charge_hours;
      s.max_discharge_hours = 0.25 * uniform_int(gen, 0, static_cast<int>(room * 4.0 / 3.0));
      s.max_charge_kw = uniform(gen, 3.0, 22.0);
      s.max_discharge_kw = uniform(gen, 3.0, 22.0);
      s.charger_efficiency = uniform(gen, 0.85, 1.0);
      building.sessions.push_back(s);
    }
    sc.buildings.push_back(std::move(building));
  }
  return sc;
}

bool has_overlap(const CommunityScenario& scenario) {
  for (int h = 0; h < scenario.time.steps; ++h) {
    bool surplus = false;
    bool deficit = false;
    for (const auto& b : scenario.buildings) {
      surplus = surplus || b.net_load.surplus_kw[h] > 0.0;
      deficit = deficit || b.net_load.deficit_kw[h] > 0.0;
    }
    if (surplus && deficit) return true;
  }
  return false;
}

bool has_price_spread(const CommunityScenario& scenario) {
  const auto& tb = scenario.tariffs;
  for (int h = 0; h < scenario.time.steps; ++h) {
    if (tb.grid_import_eur_per_kwh[h] + tb.grid_export_eur_per_kwh[h] - tb.grid_use_eur_per_kwh[h] > 1e-9) {
      return true;
    }
  }
  return false;
}

}  // namespace testsupport
