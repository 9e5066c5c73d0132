#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace temgrid {

// Error types. Validation problems are reported as data (Violation) rather
// than thrown; everything below is for hard failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class BuildError : public Error {
 public:
  using Error::Error;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

struct TimeGrid {
  double step_hours = 1.0;
  int steps = 24;
  double start_hour_of_day = 0.0;

  [[nodiscard]] double horizon_hours() const { return step_hours * steps; }
};

// Split net load: deficit is L+ (import need), surplus is L- (export
// potential). Both are nonnegative magnitudes in kW.
struct NetLoadSeries {
  std::vector<double> deficit_kw;
  std::vector<double> surplus_kw;

  // Splits a signed series (demand - PV) into the two magnitudes.
  static NetLoadSeries from_signed(const std::vector<double>& net_kw);
  [[nodiscard]] std::vector<double> signed_kw() const;
  [[nodiscard]] std::size_t size() const { return deficit_kw.size(); }
};

struct BatterySpec {
  double capacity_kwh = 0.0;
  double max_charge_kw = 0.0;
  double max_discharge_kw = 0.0;
  double one_way_efficiency = 1.0;
  double soc_min = 0.0;
  double soc_max = 1.0;
  double soc_initial = 0.0;
};

struct EVSession {
  std::string id;
  int arrival_step = 0;
  double parking_hours = 0.0;
  double requested_charge_hours = 0.0;
  double max_discharge_hours = 0.0;
  double max_charge_kw = 0.0;
  double max_discharge_kw = 0.0;
  double charger_efficiency = 1.0;

  // Number of steps the vehicle occupies, ceil(parking / step).
  [[nodiscard]] int window_steps(double step_hours) const;
  [[nodiscard]] int departure_step(double step_hours) const {
    return arrival_step + window_steps(step_hours);
  }
  [[nodiscard]] bool parked_at(int step, double step_hours) const {
    return step >= arrival_step && step < departure_step(step_hours);
  }
};

// All tariffs in EUR/kWh (grid) or EUR/h (EV contract). Export and
// discharge/flexibility tariffs are negative when they are income to the
// counterparty of the building.
struct TariffBook {
  std::vector<double> grid_import_eur_per_kwh;
  std::vector<double> grid_export_eur_per_kwh;
  std::vector<double> grid_use_eur_per_kwh;
  double parking_eur_per_hour = 0.0;
  double flexibility_eur_per_hour = 0.0;
  std::vector<double> charge_eur_per_hour;
  std::vector<double> discharge_eur_per_hour;
};

struct BuildingAssets {
  std::string name;
  NetLoadSeries net_load;
  BatterySpec battery;
  std::vector<EVSession> sessions;
};

struct SolverOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  double comp_tol = 1e-5;
  int max_nodes = 10000;
  double time_limit_seconds = 60.0;
};

enum class CompensationMode { kOneWay, kRoundTrip };
enum class TerminalSoc { kFree, kRestore };
enum class RatioFormula { kAsWritten, kPlainRatio };

struct ScenarioOptions {
  SolverOptions solver;
  CompensationMode compensation = CompensationMode::kOneWay;
  TerminalSoc terminal_soc = TerminalSoc::kRestore;
  RatioFormula ratio_formula = RatioFormula::kAsWritten;
  bool eq2_verbatim = false;
};

struct CommunityScenario {
  TimeGrid time;
  TariffBook tariffs;
  std::vector<BuildingAssets> buildings;
  ScenarioOptions options;
};

enum class RunMode { kBaseline, kIndividual, kCommunity };

const char* to_string(RunMode mode);
RunMode parse_run_mode(const std::string& text);
const char* to_string(CompensationMode mode);
CompensationMode parse_compensation_mode(const std::string& text);
const char* to_string(TerminalSoc mode);
TerminalSoc parse_terminal_soc(const std::string& text);
const char* to_string(RatioFormula formula);
RatioFormula parse_ratio_formula(const std::string& text);

struct Violation {
  std::string code;     // machine readable, e.g. "net-load-overlap@3"
  std::string path;     // where in the scenario, e.g. "buildings[1].net_load"
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Checks every scenario invariant. Returns an empty list for a valid
// scenario; never throws.
std::vector<Violation> validate_scenario(const CommunityScenario& scenario);

// Thrown by loaders when validation fails; carries the full list.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  [[nodiscard]] const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace temgrid
