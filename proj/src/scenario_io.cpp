#include "temgrid/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "temgrid/rng.hpp"

namespace temgrid::io {

using nlohmann::json;

ParseError::ParseError(const std::string& message, std::string field, int line)
    : Error(line > 0 ? fmt::format("line {}: {}", line, message)
                     : (field.empty() ? message : fmt::format("{}: {}", field, message))),
      field_(std::move(field)),
      line_(line) {}

namespace {

void check_moments(const Moments& m, const char* name) {
  const bool finite = std::isfinite(m.mean) && std::isfinite(m.std) && std::isfinite(m.min) && std::isfinite(m.max);
  if (!finite || m.min > m.mean || m.mean > m.max || m.std < 0.0) {
    throw DomainError(fmt::format("{} statistics need min <= mean <= max and std >= 0 (got {}/{}/{}/{})", name,
                                  m.mean, m.std, m.min, m.max));
  }
}

double draw(const Moments& m, rng::Pcg64& gen) {
  double v = m.mean + m.std * gen.normal();
  v = std::clamp(v, m.min, m.max);
  v = std::round(v / kDurationQuantum) * kDurationQuantum;
  return std::clamp(v, m.min, m.max);
}

int arrival_step_for(double start_hour, const TimeGrid& time) {
  return static_cast<int>(std::floor((start_hour - time.start_hour_of_day) / time.step_hours + 1e-9));
}

bool session_fits(const EVSession& s, const TimeGrid& time) {
  return s.requested_charge_hours + s.max_discharge_hours <= s.parking_hours + 1e-9 && s.arrival_step >= 0 &&
         s.departure_step(time.step_hours) <= time.steps;
}

// ---------------------------------------------------------------------------
// JSON reading helpers. Every accessor carries the dotted path of the field
// so errors point at the offending entry.

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string item(const std::string& path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing required field", child(path, key));
  return *it;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError("expected an object", path);
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    if (key.starts_with('_') || key == "description") continue;
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ParseError("unknown field", child(path, key));
    }
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError("expected a number", path);
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError("expected an integer", path);
  return j.get<int>();
}

std::uint64_t as_seed(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw ParseError("expected a nonnegative integer", path);
  }
  return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError("expected a string", path);
  return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ParseError("expected true or false", path);
  return j.get<bool>();
}

std::vector<double> as_series(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError("expected an array of numbers", path);
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], item(path, i)));
  return out;
}

// A scalar broadcasts over the horizon; an array is taken as-is (length is
// checked by validation).
std::vector<double> as_series_or_scalar(const json& j, int steps, const std::string& path) {
  if (j.is_number()) return std::vector<double>(static_cast<std::size_t>(std::max(steps, 0)), j.get<double>());
  return as_series(j, path);
}

template <typename Parse>
auto parse_enum(const json& j, const std::string& path, Parse parse) {
  const auto text = as_string(j, path);
  try {
    return parse(text);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), path);
  }
}

TimeGrid parse_time(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"step_hours", "steps", "start_hour_of_day"}, path);
  TimeGrid t;
  if (j.contains("step_hours")) t.step_hours = as_number(j["step_hours"], child(path, "step_hours"));
  if (j.contains("steps")) t.steps = as_int(j["steps"], child(path, "steps"));
  if (j.contains("start_hour_of_day")) {
    t.start_hour_of_day = as_number(j["start_hour_of_day"], child(path, "start_hour_of_day"));
  }
  return t;
}

TariffBook parse_tariffs(const json& j, int steps, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"unit", "grid_import", "grid_export", "grid_use", "parking", "flexibility", "charge", "discharge"},
                 path);
  double scale = 1e-3;
  if (j.contains("unit")) {
    const auto unit = as_string(j["unit"], child(path, "unit"));
    if (unit == "EUR/kWh") scale = 1.0;
    else if (unit != "EUR/MWh") throw ParseError("unit must be EUR/MWh or EUR/kWh", child(path, "unit"));
  }
  auto grid = [&](const char* key) {
    auto v = as_series_or_scalar(require(j, key, path), steps, child(path, key));
    for (double& x : v) x *= scale;
    return v;
  };
  TariffBook tb;
  tb.grid_import_eur_per_kwh = grid("grid_import");
  tb.grid_export_eur_per_kwh = grid("grid_export");
  tb.grid_use_eur_per_kwh = grid("grid_use");
  tb.parking_eur_per_hour = as_number(require(j, "parking", path), child(path, "parking"));
  tb.flexibility_eur_per_hour = as_number(require(j, "flexibility", path), child(path, "flexibility"));
  tb.charge_eur_per_hour = as_series_or_scalar(require(j, "charge", path), steps, child(path, "charge"));
  tb.discharge_eur_per_hour = as_series_or_scalar(require(j, "discharge", path), steps, child(path, "discharge"));
  return tb;
}

BatterySpec parse_battery(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"capacity_kwh", "max_charge_kw", "max_discharge_kw", "one_way_efficiency", "soc_min", "soc_max",
                     "soc_initial"},
                 path);
  BatterySpec b;
  auto num = [&](const char* key) { return as_number(require(j, key, path), child(path, key)); };
  b.capacity_kwh = num("capacity_kwh");
  b.max_charge_kw = num("max_charge_kw");
  b.max_discharge_kw = num("max_discharge_kw");
  b.one_way_efficiency = num("one_way_efficiency");
  b.soc_min = num("soc_min");
  b.soc_max = num("soc_max");
  b.soc_initial = num("soc_initial");
  return b;
}

EVSession parse_session(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"id", "arrival_step", "parking_hours", "requested_charge_hours", "max_discharge_hours",
                     "max_charge_kw", "max_discharge_kw", "charger_efficiency"},
                 path);
  EVSession s;
  auto num = [&](const char* key) { return as_number(require(j, key, path), child(path, key)); };
  s.id = as_string(require(j, "id", path), child(path, "id"));
  s.arrival_step = as_int(require(j, "arrival_step", path), child(path, "arrival_step"));
  s.parking_hours = num("parking_hours");
  s.requested_charge_hours = num("requested_charge_hours");
  s.max_discharge_hours = num("max_discharge_hours");
  s.max_charge_kw = num("max_charge_kw");
  s.max_discharge_kw = num("max_discharge_kw");
  s.charger_efficiency = num("charger_efficiency");
  return s;
}

Moments parse_moments(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"mean", "std", "min", "max"}, path);
  auto num = [&](const char* key) { return as_number(require(j, key, path), child(path, key)); };
  return {num("mean"), num("std"), num("min"), num("max")};
}

EVRequestStats parse_stats(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"parking", "charging", "discharging", "start"}, path);
  EVRequestStats s;
  if (j.contains("parking")) s.parking = parse_moments(j["parking"], child(path, "parking"));
  if (j.contains("charging")) s.charging = parse_moments(j["charging"], child(path, "charging"));
  if (j.contains("discharging")) s.discharging = parse_moments(j["discharging"], child(path, "discharging"));
  if (j.contains("start")) s.start = parse_moments(j["start"], child(path, "start"));
  return s;
}

ChargerSpec parse_charger(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"max_charge_kw", "max_discharge_kw", "efficiency"}, path);
  ChargerSpec c;
  if (j.contains("max_charge_kw")) c.max_charge_kw = as_number(j["max_charge_kw"], child(path, "max_charge_kw"));
  if (j.contains("max_discharge_kw")) {
    c.max_discharge_kw = as_number(j["max_discharge_kw"], child(path, "max_discharge_kw"));
  }
  if (j.contains("efficiency")) c.efficiency = as_number(j["efficiency"], child(path, "efficiency"));
  return c;
}

std::vector<EVSession> sample_from(const json& j, const TimeGrid& time, const std::string& path) {
  const auto stats = j.contains("stats") ? parse_stats(j["stats"], child(path, "stats")) : EVRequestStats{};
  const auto charger = j.contains("charger") ? parse_charger(j["charger"], child(path, "charger")) : ChargerSpec{};
  const int count = as_int(require(j, "count", path), child(path, "count"));
  const auto seed = as_seed(require(j, "seed", path), child(path, "seed"));
  try {
    return sample_sessions(stats, count, seed, time, charger);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), path);
  }
}

std::vector<double> load_csv_column(const std::filesystem::path& file, const std::string& building,
                                    const TimeGrid& time, const std::string& path) {
  std::ifstream in(file);
  if (!in) throw IoError(fmt::format("cannot open net-load file {}", file.string()));
  auto series = read_net_load_csv(in, time);
  auto it = series.find(building);
  if (it == series.end()) throw ParseError(fmt::format("no rows for building '{}' in {}", building, file.string()), path);
  return it->second;
}

BuildingAssets parse_building(const json& j, const TimeGrid& time, const std::filesystem::path& base_dir,
                              const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"name", "net_load_kw", "net_load_csv", "battery", "ev_sessions", "ev_sampling"}, path);
  BuildingAssets b;
  b.name = as_string(require(j, "name", path), child(path, "name"));

  std::vector<double> net;
  if (j.contains("net_load_kw") == j.contains("net_load_csv")) {
    throw ParseError("give exactly one of net_load_kw or net_load_csv", path);
  }
  if (j.contains("net_load_kw")) {
    const auto& nl = j["net_load_kw"];
    const auto nl_path = child(path, "net_load_kw");
    if (nl.is_object()) {
      reject_unknown(nl, {"demand_kw", "pv_kw"}, nl_path);
      const auto demand = as_series(require(nl, "demand_kw", nl_path), child(nl_path, "demand_kw"));
      const auto pv = as_series(require(nl, "pv_kw", nl_path), child(nl_path, "pv_kw"));
      if (demand.size() != pv.size()) throw ParseError("demand_kw and pv_kw lengths differ", nl_path);
      net.resize(demand.size());
      for (std::size_t h = 0; h < net.size(); ++h) net[h] = demand[h] - pv[h];
    } else {
      net = as_series(nl, nl_path);
    }
  } else {
    const auto file = base_dir / as_string(j["net_load_csv"], child(path, "net_load_csv"));
    net = load_csv_column(file, b.name, time, child(path, "net_load_csv"));
  }
  b.net_load = NetLoadSeries::from_signed(net);

  if (j.contains("battery")) b.battery = parse_battery(j["battery"], child(path, "battery"));
  if (j.contains("ev_sessions") && j.contains("ev_sampling")) {
    throw ParseError("give at most one of ev_sessions or ev_sampling", path);
  }
  if (j.contains("ev_sessions")) {
    const auto& arr = j["ev_sessions"];
    const auto arr_path = child(path, "ev_sessions");
    if (!arr.is_array()) throw ParseError("expected an array", arr_path);
    for (std::size_t i = 0; i < arr.size(); ++i) b.sessions.push_back(parse_session(arr[i], item(arr_path, i)));
  } else if (j.contains("ev_sampling")) {
    const auto sp = child(path, "ev_sampling");
    require_object(j["ev_sampling"], sp);
    reject_unknown(j["ev_sampling"], {"stats", "charger", "count", "seed"}, sp);
    b.sessions = sample_from(j["ev_sampling"], time, sp);
  }
  return b;
}

ScenarioOptions parse_options(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"feas_tol", "opt_tol", "comp_tol", "max_nodes", "time_limit_seconds", "compensation",
                     "terminal_soc", "ratio_formula", "eq2_verbatim"},
                 path);
  ScenarioOptions o;
  auto& s = o.solver;
  if (j.contains("feas_tol")) s.feas_tol = as_number(j["feas_tol"], child(path, "feas_tol"));
  if (j.contains("opt_tol")) s.opt_tol = as_number(j["opt_tol"], child(path, "opt_tol"));
  if (j.contains("comp_tol")) s.comp_tol = as_number(j["comp_tol"], child(path, "comp_tol"));
  if (j.contains("max_nodes")) s.max_nodes = as_int(j["max_nodes"], child(path, "max_nodes"));
  if (j.contains("time_limit_seconds")) {
    s.time_limit_seconds = as_number(j["time_limit_seconds"], child(path, "time_limit_seconds"));
  }
  if (j.contains("compensation")) {
    o.compensation = parse_enum(j["compensation"], child(path, "compensation"), parse_compensation_mode);
  }
  if (j.contains("terminal_soc")) {
    o.terminal_soc = parse_enum(j["terminal_soc"], child(path, "terminal_soc"), parse_terminal_soc);
  }
  if (j.contains("ratio_formula")) {
    o.ratio_formula = parse_enum(j["ratio_formula"], child(path, "ratio_formula"), parse_ratio_formula);
  }
  if (j.contains("eq2_verbatim")) o.eq2_verbatim = as_bool(j["eq2_verbatim"], child(path, "eq2_verbatim"));
  return o;
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

void EVRequestStats::check() const {
  check_moments(parking, "parking");
  check_moments(charging, "charging");
  check_moments(discharging, "discharging");
  check_moments(start, "start");
}

std::vector<EVSession> sample_sessions(const EVRequestStats& stats, int count, std::uint64_t seed,
                                       const TimeGrid& time, const ChargerSpec& charger) {
  stats.check();
  if (count < 0) throw DomainError("session count must be nonnegative");
  if (!(time.step_hours > 0.0) || time.steps < 1) throw DomainError("time grid must have positive steps");
  rng::Pcg64 gen(seed);
  std::vector<EVSession> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    EVSession s;
    s.id = fmt::format("ev{:02}", k + 1);
    s.max_charge_kw = charger.max_charge_kw;
    s.max_discharge_kw = charger.max_discharge_kw;
    s.charger_efficiency = charger.efficiency;
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      s.parking_hours = draw(stats.parking, gen);
      s.requested_charge_hours = draw(stats.charging, gen);
      s.max_discharge_hours = draw(stats.discharging, gen);
      s.arrival_step = arrival_step_for(draw(stats.start, gen), time);
      ok = session_fits(s, time);
    }
    if (!ok) {
      s.requested_charge_hours = std::min(s.requested_charge_hours, s.parking_hours);
      s.max_discharge_hours = std::min(s.max_discharge_hours, s.parking_hours - s.requested_charge_hours);
      s.parking_hours = std::min(s.parking_hours, time.horizon_hours());
      s.requested_charge_hours = std::min(s.requested_charge_hours, s.parking_hours);
      s.max_discharge_hours = std::min(s.max_discharge_hours, s.parking_hours - s.requested_charge_hours);
      s.arrival_step = std::clamp(s.arrival_step, 0, time.steps - s.window_steps(time.step_hours));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<BuildingAssets> assign_sessions(const std::vector<EVSession>& sessions,
                                            std::vector<BuildingAssets> buildings, int per_building,
                                            std::uint64_t seed) {
  if (per_building < 0) throw DomainError("per-building session count must be nonnegative");
  const std::size_t needed = static_cast<std::size_t>(per_building) * buildings.size();
  if (needed > sessions.size()) {
    throw DomainError(fmt::format("{} sessions requested ({} per building x {} buildings) but only {} available",
                                  needed, per_building, buildings.size(), sessions.size()));
  }
  std::vector<std::size_t> order(sessions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng::Pcg64 gen(seed);
  rng::shuffle(order, gen);
  for (auto& b : buildings) b.sessions.clear();
  for (std::size_t k = 0; k < needed; ++k) {
    buildings[k % buildings.size()].sessions.push_back(sessions[order[k]]);
  }
  return buildings;
}

CommunityScenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), "", line_of(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  require_object(doc, "");
  reject_unknown(doc, {"time", "tariffs", "buildings", "options", "ev_pool"}, "");

  CommunityScenario sc;
  if (doc.contains("time")) sc.time = parse_time(doc["time"], "time");
  sc.tariffs = parse_tariffs(require(doc, "tariffs", ""), sc.time.steps, "tariffs");
  const auto& arr = require(doc, "buildings", "");
  if (!arr.is_array()) throw ParseError("expected an array", "buildings");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    sc.buildings.push_back(parse_building(arr[i], sc.time, base_dir, item("buildings", i)));
  }
  if (doc.contains("ev_pool")) {
    const auto& pool = doc["ev_pool"];
    require_object(pool, "ev_pool");
    reject_unknown(pool, {"stats", "charger", "count", "seed", "per_building", "assign_seed"}, "ev_pool");
    const auto sessions = sample_from(pool, sc.time, "ev_pool");
    const int per = as_int(require(pool, "per_building", "ev_pool"), "ev_pool.per_building");
    const auto assign_seed = as_seed(require(pool, "assign_seed", "ev_pool"), "ev_pool.assign_seed");
    try {
      sc.buildings = assign_sessions(sessions, std::move(sc.buildings), per, assign_seed);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), "ev_pool");
    }
  }
  if (doc.contains("options")) sc.options = parse_options(doc["options"], "options");

  auto violations = validate_scenario(sc);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return sc;
}

CommunityScenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open scenario file {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.parent_path());
}

nlohmann::json sessions_to_json(const std::vector<EVSession>& sessions) {
  json arr = json::array();
  for (const auto& s : sessions) {
    arr.push_back({{"id", s.id},
                   {"arrival_step", s.arrival_step},
                   {"parking_hours", s.parking_hours},
                   {"requested_charge_hours", s.requested_charge_hours},
                   {"max_discharge_hours", s.max_discharge_hours},
                   {"max_charge_kw", s.max_charge_kw},
                   {"max_discharge_kw", s.max_discharge_kw},
                   {"charger_efficiency", s.charger_efficiency}});
  }
  return arr;
}

nlohmann::json scenario_to_json(const CommunityScenario& sc) {
  json doc;
  doc["time"] = {{"step_hours", sc.time.step_hours},
                 {"steps", sc.time.steps},
                 {"start_hour_of_day", sc.time.start_hour_of_day}};
  const auto& tb = sc.tariffs;
  doc["tariffs"] = {{"unit", "EUR/kWh"},
                    {"grid_import", tb.grid_import_eur_per_kwh},
                    {"grid_export", tb.grid_export_eur_per_kwh},
                    {"grid_use", tb.grid_use_eur_per_kwh},
                    {"parking", tb.parking_eur_per_hour},
                    {"flexibility", tb.flexibility_eur_per_hour},
                    {"charge", tb.charge_eur_per_hour},
                    {"discharge", tb.discharge_eur_per_hour}};
  json buildings = json::array();
  for (const auto& b : sc.buildings) {
    const auto& bat = b.battery;
    buildings.push_back({{"name", b.name},
                         {"net_load_kw", b.net_load.signed_kw()},
                         {"battery",
                          {{"capacity_kwh", bat.capacity_kwh},
                           {"max_charge_kw", bat.max_charge_kw},
                           {"max_discharge_kw", bat.max_discharge_kw},
                           {"one_way_efficiency", bat.one_way_efficiency},
                           {"soc_min", bat.soc_min},
                           {"soc_max", bat.soc_max},
                           {"soc_initial", bat.soc_initial}}},
                         {"ev_sessions", sessions_to_json(b.sessions)}});
  }
  doc["buildings"] = std::move(buildings);
  const auto& o = sc.options;
  doc["options"] = {{"feas_tol", o.solver.feas_tol},
                    {"opt_tol", o.solver.opt_tol},
                    {"comp_tol", o.solver.comp_tol},
                    {"max_nodes", o.solver.max_nodes},
                    {"time_limit_seconds", o.solver.time_limit_seconds},
                    {"compensation", to_string(o.compensation)},
                    {"terminal_soc", to_string(o.terminal_soc)},
                    {"ratio_formula", to_string(o.ratio_formula)},
                    {"eq2_verbatim", o.eq2_verbatim}};
  return doc;
}

std::string write_scenario(const CommunityScenario& scenario) { return scenario_to_json(scenario).dump(2) + "\n"; }

void write_scenario(const CommunityScenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << write_scenario(scenario);
  if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

std::map<std::string, std::vector<double>> read_net_load_csv(std::istream& in, const TimeGrid& time) {
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return std::string{};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!trim(line).empty()) break;
  }
  if (trim(line) != "hour,building,net_kw") {
    throw ParseError("expected header 'hour,building,net_kw'", "csv", std::max(line_no, 1));
  }
  std::map<std::string, std::vector<double>> out;
  std::map<std::string, std::set<int>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (cells.size() != 3) throw ParseError("expected 3 comma-separated fields", "csv", line_no);
    double hour = 0.0;
    double value = 0.0;
    try {
      std::size_t used = 0;
      hour = std::stod(cells[0], &used);
      if (used != cells[0].size()) throw std::invalid_argument("hour");
      value = std::stod(cells[2], &used);
      if (used != cells[2].size()) throw std::invalid_argument("net_kw");
    } catch (const std::exception&) {
      throw ParseError("hour and net_kw must be decimal numbers", "csv", line_no);
    }
    const double pos = hour / time.step_hours;
    const long step = std::lround(pos);
    if (std::fabs(pos - static_cast<double>(step)) > 1e-9 || step < 0 || step >= time.steps) {
      throw ParseError(fmt::format("hour {} is not a step of the horizon", cells[0]), "csv", line_no);
    }
    auto& series = out[cells[1]];
    series.resize(static_cast<std::size_t>(time.steps), 0.0);
    if (!seen[cells[1]].insert(static_cast<int>(step)).second) {
      throw ParseError(fmt::format("duplicate hour {} for building {}", cells[0], cells[1]), "csv", line_no);
    }
    series[static_cast<std::size_t>(step)] = value;
  }
  for (const auto& [name, steps] : seen) {
    if (static_cast<int>(steps.size()) != time.steps) {
      throw ParseError(fmt::format("building {} has {} of {} steps", name, steps.size(), time.steps), "csv", line_no);
    }
  }
  return out;
}

}  // namespace temgrid::io
