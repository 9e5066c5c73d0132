#include "temgrid/domain.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace temgrid {

NetLoadSeries NetLoadSeries::from_signed(const std::vector<double>& net_kw) {
  NetLoadSeries out;
  out.deficit_kw.reserve(net_kw.size());
  out.surplus_kw.reserve(net_kw.size());
  for (double n : net_kw) {
    out.deficit_kw.push_back(n > 0.0 ? n : 0.0);
    out.surplus_kw.push_back(n < 0.0 ? -n : 0.0);
  }
  return out;
}

std::vector<double> NetLoadSeries::signed_kw() const {
  std::vector<double> out(deficit_kw.size());
  for (std::size_t h = 0; h < out.size(); ++h) {
    out[h] = surplus_kw[h] > 0.0 ? -surplus_kw[h] : deficit_kw[h];
  }
  return out;
}

int EVSession::window_steps(double step_hours) const {
  // Quarter-hour durations divided by the step are frequently exact; the
  // small slack keeps 8.0 / (1/3) from becoming 25 steps.
  return static_cast<int>(std::ceil(parking_hours / step_hours - 1e-9));
}

namespace {

struct NamedMode {
  const char* name;
  int value;
};

template <typename Enum, std::size_t N>
Enum parse_named(const std::string& text, const NamedMode (&table)[N], const char* what) {
  for (const auto& entry : table) {
    if (text == entry.name) return static_cast<Enum>(entry.value);
  }
  throw DomainError(fmt::format("unknown {} '{}'", what, text));
}

constexpr NamedMode kRunModes[] = {{"baseline", 0}, {"individual", 1}, {"community", 2}};
constexpr NamedMode kCompensation[] = {{"one-way", 0}, {"round-trip", 1}};
constexpr NamedMode kTerminal[] = {{"free", 0}, {"restore", 1}};
constexpr NamedMode kRatio[] = {{"as-written", 0}, {"plain-ratio", 1}};

class Collector {
 public:
  void add(std::string code, std::string path, std::string message) {
    out_.push_back({std::move(code), std::move(path), std::move(message)});
  }
  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

bool check_length(Collector& c, std::size_t actual, int steps, const std::string& path) {
  if (actual == static_cast<std::size_t>(std::max(steps, 0))) return true;
  c.add("series-length-mismatch", path,
        fmt::format("{} has {} entries, expected {}", path, actual, steps));
  return false;
}

void check_finite(Collector& c, const std::vector<double>& series, const std::string& path) {
  for (std::size_t h = 0; h < series.size(); ++h) {
    if (!std::isfinite(series[h])) {
      c.add(fmt::format("value-not-finite@{}", h), path, fmt::format("{}[{}] is not finite", path, h));
    }
  }
}

void validate_time(Collector& c, const TimeGrid& t) {
  if (!(t.step_hours > 0.0)) c.add("time-step-nonpositive", "time.step_hours", "step_hours must be > 0");
  if (t.steps < 1) c.add("time-steps-nonpositive", "time.steps", "steps must be >= 1");
  if (t.step_hours > 0.0 && t.steps >= 1 && t.horizon_hours() > 24.0 + 1e-9) {
    c.add("time-horizon-exceeds-day", "time",
          fmt::format("steps x step_hours = {} h exceeds a single day", t.horizon_hours()));
  }
  if (!(t.start_hour_of_day >= 0.0 && t.start_hour_of_day < 24.0)) {
    c.add("time-start-out-of-range", "time.start_hour_of_day", "start_hour_of_day must be in [0, 24)");
  }
}

void validate_tariffs(Collector& c, const TariffBook& tb, int steps) {
  const bool import_ok = check_length(c, tb.grid_import_eur_per_kwh.size(), steps, "tariffs.grid_import");
  const bool export_ok = check_length(c, tb.grid_export_eur_per_kwh.size(), steps, "tariffs.grid_export");
  const bool use_ok = check_length(c, tb.grid_use_eur_per_kwh.size(), steps, "tariffs.grid_use");
  check_length(c, tb.charge_eur_per_hour.size(), steps, "tariffs.charge");
  check_length(c, tb.discharge_eur_per_hour.size(), steps, "tariffs.discharge");
  check_finite(c, tb.grid_import_eur_per_kwh, "tariffs.grid_import");
  check_finite(c, tb.grid_export_eur_per_kwh, "tariffs.grid_export");
  check_finite(c, tb.grid_use_eur_per_kwh, "tariffs.grid_use");
  check_finite(c, tb.charge_eur_per_hour, "tariffs.charge");
  check_finite(c, tb.discharge_eur_per_hour, "tariffs.discharge");
  if (!std::isfinite(tb.parking_eur_per_hour)) c.add("value-not-finite", "tariffs.parking", "parking tariff is not finite");
  if (!std::isfinite(tb.flexibility_eur_per_hour)) {
    c.add("value-not-finite", "tariffs.flexibility", "flexibility tariff is not finite");
  }

  if (import_ok) {
    for (int h = 0; h < steps; ++h) {
      if (tb.grid_import_eur_per_kwh[h] < 0.0) {
        c.add(fmt::format("grid-import-negative@{}", h), "tariffs.grid_import",
              fmt::format("grid import tariff at step {} is negative", h));
      }
    }
  }
  if (export_ok) {
    for (int h = 0; h < steps; ++h) {
      if (tb.grid_export_eur_per_kwh[h] > 0.0) {
        c.add(fmt::format("grid-export-positive@{}", h), "tariffs.grid_export",
              fmt::format("grid export tariff at step {} must be <= 0 (income)", h));
      }
    }
  }
  if (use_ok) {
    for (int h = 0; h < steps; ++h) {
      if (tb.grid_use_eur_per_kwh[h] < 0.0) {
        c.add(fmt::format("grid-use-negative@{}", h), "tariffs.grid_use",
              fmt::format("grid use tariff at step {} is negative", h));
      }
    }
  }
  if (import_ok && export_ok && use_ok) {
    for (int h = 0; h < steps; ++h) {
      const double upper = tb.grid_import_eur_per_kwh[h] - tb.grid_use_eur_per_kwh[h];
      if (upper < -tb.grid_export_eur_per_kwh[h]) {
        c.add(fmt::format("tariff-band-empty@{}", h), "tariffs",
              fmt::format("import - use ({}) is below export income ({}) at step {}", upper,
                          -tb.grid_export_eur_per_kwh[h], h));
      }
    }
  }
}

void validate_battery(Collector& c, const BatterySpec& b, const std::string& path) {
  const double values[] = {b.capacity_kwh, b.max_charge_kw, b.max_discharge_kw, b.one_way_efficiency,
                           b.soc_min,      b.soc_max,       b.soc_initial};
  if (!std::all_of(std::begin(values), std::end(values), [](double v) { return std::isfinite(v); })) {
    c.add("value-not-finite", path, "battery has a non-finite field");
    return;
  }
  if (b.capacity_kwh < 0.0 || b.max_charge_kw < 0.0 || b.max_discharge_kw < 0.0) {
    c.add("battery-negative", path, "battery capacity and powers must be >= 0");
  }
  if (!(b.one_way_efficiency > 0.0 && b.one_way_efficiency <= 1.0)) {
    c.add("battery-efficiency-range", path + ".efficiency", "battery efficiency must be in (0, 1]");
  }
  if (!(0.0 <= b.soc_min && b.soc_min <= b.soc_initial && b.soc_initial <= b.soc_max && b.soc_max <= 1.0)) {
    c.add("battery-soc-order", path, "require 0 <= soc_min <= soc_initial <= soc_max <= 1");
  }
}

void validate_session(Collector& c, const EVSession& s, const TimeGrid& t, const std::string& path) {
  const double values[] = {s.parking_hours,  s.requested_charge_hours, s.max_discharge_hours,
                           s.max_charge_kw,  s.max_discharge_kw,       s.charger_efficiency};
  if (!std::all_of(std::begin(values), std::end(values), [](double v) { return std::isfinite(v); })) {
    c.add("value-not-finite", path, "session has a non-finite field");
    return;
  }
  if (s.parking_hours < 0.0 || s.requested_charge_hours < 0.0 || s.max_discharge_hours < 0.0 ||
      s.max_charge_kw < 0.0 || s.max_discharge_kw < 0.0) {
    c.add("ev-negative-value", path, "session durations and powers must be >= 0");
  }
  if (!(s.charger_efficiency > 0.0 && s.charger_efficiency <= 1.0)) {
    c.add("ev-efficiency-range", path + ".efficiency", "charger efficiency must be in (0, 1]");
  }
  if (s.requested_charge_hours + s.max_discharge_hours > s.parking_hours + 1e-9) {
    c.add("ev-periods-exceed-parking", path,
          fmt::format("charge {} h + discharge {} h exceeds parking {} h", s.requested_charge_hours,
                      s.max_discharge_hours, s.parking_hours));
  }
  if (s.requested_charge_hours > 0.0 && s.max_charge_kw <= 0.0) {
    c.add("ev-charge-power-missing", path, "charging is requested but max_charge_kw is 0");
  }
  if (s.arrival_step < 0) {
    c.add("ev-arrival-negative", path + ".arrival_step", "arrival_step must be >= 0");
  } else if (t.step_hours > 0.0 && s.parking_hours >= 0.0 && s.departure_step(t.step_hours) > t.steps) {
    c.add("ev-session-exceeds-horizon", path,
          fmt::format("session occupies steps [{}, {}) beyond horizon {}", s.arrival_step,
                      s.departure_step(t.step_hours), t.steps));
  }
}

void validate_building(Collector& c, const BuildingAssets& b, const TimeGrid& t, const std::string& path) {
  const auto& nl = b.net_load;
  const bool def_ok = check_length(c, nl.deficit_kw.size(), t.steps, path + ".net_load.deficit");
  const bool sur_ok = check_length(c, nl.surplus_kw.size(), t.steps, path + ".net_load.surplus");
  check_finite(c, nl.deficit_kw, path + ".net_load.deficit");
  check_finite(c, nl.surplus_kw, path + ".net_load.surplus");
  if (def_ok && sur_ok) {
    for (int h = 0; h < t.steps; ++h) {
      if (nl.deficit_kw[h] < 0.0 || nl.surplus_kw[h] < 0.0) {
        c.add(fmt::format("net-load-negative@{}", h), path + ".net_load",
              fmt::format("net load magnitudes must be >= 0 at step {}", h));
      }
      if (nl.deficit_kw[h] > 0.0 && nl.surplus_kw[h] > 0.0) {
        c.add(fmt::format("net-load-overlap@{}", h), path + ".net_load",
              fmt::format("deficit and surplus both positive at step {}", h));
      }
    }
  }
  validate_battery(c, b.battery, path + ".battery");

  std::set<std::string> ids;
  for (std::size_t n = 0; n < b.sessions.size(); ++n) {
    const auto spath = fmt::format("{}.ev_sessions[{}]", path, n);
    if (!ids.insert(b.sessions[n].id).second) {
      c.add("ev-duplicate-id", spath + ".id", fmt::format("session id '{}' is not unique", b.sessions[n].id));
    }
    validate_session(c, b.sessions[n], t, spath);
  }
}

void validate_options(Collector& c, const ScenarioOptions& o) {
  const auto& s = o.solver;
  if (!(s.feas_tol > 0.0) || !(s.opt_tol > 0.0) || !(s.comp_tol > 0.0)) {
    c.add("solver-tolerance-nonpositive", "options", "solver tolerances must be > 0");
  }
  if (s.max_nodes < 1) c.add("solver-max-nodes-nonpositive", "options.max_nodes", "max_nodes must be >= 1");
  if (!(s.time_limit_seconds > 0.0)) {
    c.add("solver-time-limit-nonpositive", "options.time_limit_seconds", "time limit must be > 0");
  }
}

}  // namespace

const char* to_string(RunMode mode) { return kRunModes[static_cast<int>(mode)].name; }
RunMode parse_run_mode(const std::string& text) { return parse_named<RunMode>(text, kRunModes, "run mode"); }
const char* to_string(CompensationMode mode) { return kCompensation[static_cast<int>(mode)].name; }
CompensationMode parse_compensation_mode(const std::string& text) {
  return parse_named<CompensationMode>(text, kCompensation, "compensation mode");
}
const char* to_string(TerminalSoc mode) { return kTerminal[static_cast<int>(mode)].name; }
TerminalSoc parse_terminal_soc(const std::string& text) {
  return parse_named<TerminalSoc>(text, kTerminal, "terminal soc mode");
}
const char* to_string(RatioFormula formula) { return kRatio[static_cast<int>(formula)].name; }
RatioFormula parse_ratio_formula(const std::string& text) {
  return parse_named<RatioFormula>(text, kRatio, "ratio formula");
}

std::vector<Violation> validate_scenario(const CommunityScenario& scenario) {
  Collector c;
  validate_time(c, scenario.time);
  validate_tariffs(c, scenario.tariffs, scenario.time.steps);
  if (scenario.buildings.empty()) c.add("no-buildings", "buildings", "scenario needs at least one building");
  std::set<std::string> names;
  for (std::size_t b = 0; b < scenario.buildings.size(); ++b) {
    const auto path = fmt::format("buildings[{}]", b);
    if (!names.insert(scenario.buildings[b].name).second) {
      c.add("building-name-duplicate", path + ".name",
            fmt::format("building name '{}' is not unique", scenario.buildings[b].name));
    }
    validate_building(c, scenario.buildings[b], scenario.time, path);
  }
  validate_options(c, scenario.options);
  return c.take();
}

namespace {
std::string join_violations(const std::vector<Violation>& v) {
  std::string out = fmt::format("scenario has {} violation(s)", v.size());
  for (const auto& item : v) out += fmt::format("\n  {}: {} ({})", item.code, item.message, item.path);
  return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

}  // namespace temgrid
