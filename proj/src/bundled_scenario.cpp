#include <array>
#include <cmath>
#include <numbers>

#include "temgrid/rng.hpp"
#include "temgrid/scenario_io.hpp"

namespace temgrid::io {

namespace {

// Hourly wholesale-like profile, normalized to mean 1 below.
constexpr std::array<double, 24> kPriceShape = {
    0.85, 0.82, 0.80, 0.80, 0.82, 0.88, 0.98, 1.08, 1.12, 1.08, 1.02, 0.98,
    0.95, 0.94, 0.95, 0.98, 1.04, 1.12, 1.20, 1.22, 1.16, 1.06, 0.96, 0.89,
};

struct Profile {
  const char* name;
  double base_kw;
  double day_kw;       // extra load between day_start and day_end
  double day_start;
  double day_end;
  double evening_kw;   // extra load 18:00-22:00
  double pv_peak_kw;
};

constexpr std::array<Profile, 4> kProfiles = {{
    {"office", 22.0, 48.0, 8.0, 18.0, 4.0, 45.0},
    {"residential-a", 10.0, 6.0, 7.0, 9.0, 22.0, 115.0},
    {"residential-b", 14.0, 8.0, 7.0, 9.0, 26.0, 85.0},
    {"school", 16.0, 52.0, 8.0, 16.0, 2.0, 70.0},
}};

double pv_fraction(double mid_hour) {
  constexpr double kSunrise = 6.5;
  constexpr double kSunset = 19.5;
  if (mid_hour <= kSunrise || mid_hour >= kSunset) return 0.0;
  return std::sin(std::numbers::pi * (mid_hour - kSunrise) / (kSunset - kSunrise));
}

}  // namespace

CommunityScenario bundled_scenario() {
  CommunityScenario sc;
  sc.time = {1.0, 24, 0.0};
  const int steps = sc.time.steps;

  double mean_shape = 0.0;
  for (double v : kPriceShape) mean_shape += v;
  mean_shape /= static_cast<double>(kPriceShape.size());

  auto& tb = sc.tariffs;
  for (int h = 0; h < steps; ++h) {
    const double shape = kPriceShape[static_cast<std::size_t>(h)] / mean_shape;
    tb.grid_import_eur_per_kwh.push_back(0.1228 * shape);
    tb.grid_export_eur_per_kwh.push_back(-0.0358);
    tb.grid_use_eur_per_kwh.push_back(0.050);
    tb.charge_eur_per_hour.push_back(2.0 * shape);
    tb.discharge_eur_per_hour.push_back(-3.0 * shape);
  }
  tb.parking_eur_per_hour = 0.5;
  tb.flexibility_eur_per_hour = -0.5;

  rng::Pcg64 noise(2024);
  for (const auto& p : kProfiles) {
    BuildingAssets b;
    b.name = p.name;
    std::vector<double> net(static_cast<std::size_t>(steps));
    for (int h = 0; h < steps; ++h) {
      const double mid = h + 0.5;
      double demand = p.base_kw;
      if (mid > p.day_start && mid < p.day_end) demand += p.day_kw;
      if (mid > 18.0 && mid < 22.0) demand += p.evening_kw;
      demand *= 1.0 + 0.05 * noise.normal();
      const double pv = p.pv_peak_kw * pv_fraction(mid) * (1.0 + 0.03 * noise.normal());
      net[static_cast<std::size_t>(h)] = std::round((demand - std::max(pv, 0.0)) * 10.0) / 10.0;
    }
    b.net_load = NetLoadSeries::from_signed(net);
    b.battery = {90.0, 45.0, 45.0, 0.95, 0.2, 0.9, 0.5};
    sc.buildings.push_back(std::move(b));
  }

  const auto pool = sample_sessions(EVRequestStats{}, 30, 42, sc.time, ChargerSpec{});
  sc.buildings = assign_sessions(pool, std::move(sc.buildings), 6, 7);
  return sc;
}

}  // namespace temgrid::io
