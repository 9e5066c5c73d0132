#pragma once

#include <span>
#include <vector>

#include "temgrid/domain.hpp"

namespace temgrid::ev {

// Period accounting for one parked session. All durations in hours.
struct SessionLedger {
  std::vector<double> used_charge_hours;     // per step
  std::vector<double> used_discharge_hours;  // per step
  double total_charge_hours = 0.0;
  double total_discharge_hours = 0.0;
  double idle_hours = 0.0;
  double revenue_eur = 0.0;
};

// Fraction of the step spent at full power.
double used_period(double power_kw, double max_power_kw, double step_hours);

// Total charging period needed to deliver the request and replace the
// energy taken out by discharging.
double required_total_charge_hours(double requested_hours, double total_discharge_hours, double efficiency,
                                   CompensationMode mode);

// Multiplier on discharge hours inside required_total_charge_hours.
double compensation_factor(double efficiency, CompensationMode mode);

// Builds a ledger from per-step used periods. Rejects idle < -tol, a
// discharge total above the cap and any prefix where discharge runs ahead of
// charge (all with tolerance `tol`). Revenue is left at 0; see
// session_revenue.
SessionLedger make_ledger(const EVSession& session, std::span<const double> used_charge_hours,
                          std::span<const double> used_discharge_hours, double tol = 1e-9);

// Same from per-step powers in kW.
SessionLedger ledger_from_powers(const EVSession& session, std::span<const double> charge_kw,
                                 std::span<const double> discharge_kw, double step_hours, double tol = 1e-9);

// Income to the building from one session; parking plus idle reward plus
// per-step charge and discharge tariffs.
double session_revenue(const EVSession& session, const SessionLedger& ledger, const TariffBook& tariffs,
                       const TimeGrid& time, double tol = 1e-9);

}  // namespace temgrid::ev
