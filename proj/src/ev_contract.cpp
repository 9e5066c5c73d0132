#include "temgrid/ev_contract.hpp"

#include <fmt/format.h>

namespace temgrid::ev {

double used_period(double power_kw, double max_power_kw, double step_hours) {
  if (max_power_kw <= 0.0) {
    if (power_kw > 0.0) throw DomainError(fmt::format("power {} kW with zero power cap", power_kw));
    return 0.0;
  }
  if (power_kw < 0.0) throw DomainError(fmt::format("negative power {} kW", power_kw));
  return power_kw / max_power_kw * step_hours;
}

double compensation_factor(double efficiency, CompensationMode mode) {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw DomainError(fmt::format("efficiency {} outside (0, 1]", efficiency));
  }
  return mode == CompensationMode::kRoundTrip ? 1.0 / (efficiency * efficiency) : 1.0 / efficiency;
}

double required_total_charge_hours(double requested_hours, double total_discharge_hours, double efficiency,
                                   CompensationMode mode) {
  if (requested_hours < 0.0 || total_discharge_hours < 0.0) {
    throw DomainError("required_total_charge_hours needs nonnegative periods");
  }
  return requested_hours + total_discharge_hours * compensation_factor(efficiency, mode);
}

SessionLedger make_ledger(const EVSession& session, std::span<const double> used_charge_hours,
                          std::span<const double> used_discharge_hours, double tol) {
  if (used_charge_hours.size() != used_discharge_hours.size()) {
    throw DomainError("ledger series lengths differ");
  }
  SessionLedger ledger;
  ledger.used_charge_hours.assign(used_charge_hours.begin(), used_charge_hours.end());
  ledger.used_discharge_hours.assign(used_discharge_hours.begin(), used_discharge_hours.end());

  double charged = 0.0;
  double discharged = 0.0;
  for (std::size_t h = 0; h < used_charge_hours.size(); ++h) {
    if (used_charge_hours[h] < -tol || used_discharge_hours[h] < -tol) {
      throw ContractViolation(fmt::format("session {}: negative used period at step {}", session.id, h));
    }
    charged += used_charge_hours[h];
    discharged += used_discharge_hours[h];
    if (discharged > charged + tol) {
      throw ContractViolation(fmt::format("session {}: discharge ({} h) exceeds prior charge ({} h) by step {}",
                                          session.id, discharged, charged, h));
    }
  }
  ledger.total_charge_hours = charged;
  ledger.total_discharge_hours = discharged;
  if (discharged > session.max_discharge_hours + tol) {
    throw ContractViolation(fmt::format("session {}: discharge {} h exceeds the {} h allowance", session.id,
                                        discharged, session.max_discharge_hours));
  }
  ledger.idle_hours = session.parking_hours - charged - discharged;
  if (ledger.idle_hours < -tol) {
    throw ContractViolation(fmt::format("session {}: used periods exceed parking by {} h", session.id,
                                        -ledger.idle_hours));
  }
  return ledger;
}

SessionLedger ledger_from_powers(const EVSession& session, std::span<const double> charge_kw,
                                 std::span<const double> discharge_kw, double step_hours, double tol) {
  std::vector<double> up(charge_kw.size());
  std::vector<double> down(discharge_kw.size());
  // Solver output can sit a hair below zero; clip within tolerance.
  auto clip = [tol](double p) { return (p < 0.0 && p >= -tol) ? 0.0 : p; };
  for (std::size_t h = 0; h < up.size(); ++h) {
    up[h] = used_period(clip(charge_kw[h]), session.max_charge_kw, step_hours);
  }
  for (std::size_t h = 0; h < down.size(); ++h) {
    down[h] = used_period(clip(discharge_kw[h]), session.max_discharge_kw, step_hours);
  }
  return make_ledger(session, up, down, tol);
}

double session_revenue(const EVSession& session, const SessionLedger& ledger, const TariffBook& tariffs,
                       const TimeGrid& time, double tol) {
  if (ledger.idle_hours < -tol) {
    throw ContractViolation(fmt::format("session {}: negative idle period {}", session.id, ledger.idle_hours));
  }
  if (ledger.used_charge_hours.size() != static_cast<std::size_t>(time.steps) ||
      ledger.used_discharge_hours.size() != static_cast<std::size_t>(time.steps)) {
    throw DomainError(fmt::format("session {}: ledger does not span the horizon", session.id));
  }
  double revenue = session.parking_hours * tariffs.parking_eur_per_hour +
                   ledger.idle_hours * tariffs.flexibility_eur_per_hour;
  for (int h = 0; h < time.steps; ++h) {
    revenue += ledger.used_charge_hours[h] * tariffs.charge_eur_per_hour.at(h);
    revenue += ledger.used_discharge_hours[h] * tariffs.discharge_eur_per_hour.at(h);
  }
  return revenue;
}

}  // namespace temgrid::ev
