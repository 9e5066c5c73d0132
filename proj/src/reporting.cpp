#include "temgrid/reporting.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "temgrid/ev_contract.hpp"

namespace temgrid::report {

std::string fixed(double value, int decimals) {
  std::string s = fmt::format("{:.{}f}", value, decimals);
  if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

const ModeCosts* CostBreakdown::find(RunMode mode) const {
  for (const auto& m : modes) {
    if (m.mode == mode) return &m;
  }
  return nullptr;
}

namespace {

std::optional<double> saving(double reference, double value) {
  if (reference == 0.0) return std::nullopt;
  return 100.0 * (reference - value) / std::fabs(reference);
}

}  // namespace

std::optional<double> CostBreakdown::electricity_saving_vs_baseline(RunMode mode) const {
  const auto* m = find(mode);
  if (m == nullptr) return std::nullopt;
  return saving(baseline_electricity_total_eur, m->total.electricity_eur);
}

std::optional<double> CostBreakdown::objective_saving_vs_baseline(RunMode mode) const {
  const auto* m = find(mode);
  if (m == nullptr) return std::nullopt;
  return saving(baseline_electricity_total_eur, m->total.objective_eur);
}

std::optional<double> CostBreakdown::electricity_saving_vs_individual() const {
  const auto* ind = find(RunMode::kIndividual);
  const auto* com = find(RunMode::kCommunity);
  if (ind == nullptr || com == nullptr) return std::nullopt;
  return saving(ind->total.electricity_eur, com->total.electricity_eur);
}

std::optional<double> CostBreakdown::objective_saving_vs_individual() const {
  const auto* ind = find(RunMode::kIndividual);
  const auto* com = find(RunMode::kCommunity);
  if (ind == nullptr || com == nullptr) return std::nullopt;
  return saving(ind->total.objective_eur, com->total.objective_eur);
}

Costs building_costs(const CommunityScenario& scenario, const tariff::CommunityPrices& prices, RunMode mode,
                     const solver::DispatchSolution& solution, int b) {
  const auto& building = scenario.buildings.at(b);
  const auto& d = solution.buildings.at(b);
  const auto& tb = scenario.tariffs;
  const double dh = scenario.time.step_hours;
  const bool community = mode == RunMode::kCommunity;
  const int sessions = static_cast<int>(building.sessions.size());

  Costs c;
  for (int h = 0; h < scenario.time.steps; ++h) {
    const double c_ig = tb.grid_import_eur_per_kwh[h];
    const double c_eg = tb.grid_export_eur_per_kwh[h];
    const double cim = d.comm_import_kw[h];
    const double cex = d.comm_export_kw[h];
    double step_cost = 0.0;
    if (scenario.options.eq2_verbatim) {
      double ev_ch = 0.0;
      double ev_dis = 0.0;
      for (int n = 0; n < sessions; ++n) {
        ev_ch += d.ev_charge_kw[n][h];
        ev_dis += d.ev_discharge_kw[n][h];
      }
      step_cost = c_ig * (building.net_load.deficit_kw[h] - d.bs_discharge_kw[h] - ev_dis - cim) +
                  c_eg * (building.net_load.surplus_kw[h] - d.bs_charge_kw[h] - ev_ch - cex);
    } else {
      step_cost = c_ig * d.grid_import_kw[h] + c_eg * d.grid_export_kw[h];
    }
    if (community) step_cost += prices.import_eur_per_kwh.at(h) * cim + prices.export_eur_per_kwh.at(h) * cex;
    c.electricity_eur += dh * step_cost;
  }

  if (mode != RunMode::kBaseline) {
    for (int n = 0; n < sessions; ++n) {
      const auto& s = building.sessions[n];
      try {
        const auto ledger = ev::ledger_from_powers(s, d.ev_charge_kw[n], d.ev_discharge_kw[n], dh, 1e-6);
        c.ev_revenue_eur += ev::session_revenue(s, ledger, tb, scenario.time, 1e-6);
      } catch (const ContractViolation& e) {
        throw ReportError(fmt::format("building {}: {}", building.name, e.what()));
      }
    }
  }
  c.objective_eur = c.electricity_eur - c.ev_revenue_eur;
  return c;
}

CostBreakdown summarize(const CommunityScenario& scenario, const tariff::CommunityPrices& prices,
                        const std::vector<const solver::DispatchSolution*>& solutions) {
  CostBreakdown out;
  const int buildings = static_cast<int>(scenario.buildings.size());
  const auto& tb = scenario.tariffs;
  for (int b = 0; b < buildings; ++b) {
    const auto& nl = scenario.buildings[b].net_load;
    double base = 0.0;
    for (int h = 0; h < scenario.time.steps; ++h) {
      base += scenario.time.step_hours *
              (nl.deficit_kw[h] * tb.grid_import_eur_per_kwh[h] + nl.surplus_kw[h] * tb.grid_export_eur_per_kwh[h]);
    }
    out.building_names.push_back(scenario.buildings[b].name);
    out.baseline_electricity_eur.push_back(base);
    out.baseline_electricity_total_eur += base;
  }
  out.mean_export_tariff_eur_per_kwh = prices.weighted_export(tariff::total_surplus_kw(scenario));
  out.mean_import_tariff_eur_per_kwh = prices.weighted_import(tariff::total_deficit_kw(scenario));

  for (const auto* sol : solutions) {
    if (sol == nullptr) throw ReportError("missing solution");
    if (out.find(sol->mode) != nullptr) {
      throw ReportError(fmt::format("mode {} supplied twice", to_string(sol->mode)));
    }
    if (static_cast<int>(sol->buildings.size()) != buildings) {
      throw ReportError(fmt::format("{} solution has {} buildings, scenario has {}", to_string(sol->mode),
                                    sol->buildings.size(), buildings));
    }
    ModeCosts mc;
    mc.mode = sol->mode;
    mc.status = sol->status;
    mc.solver_objective_eur = sol->objective;
    for (int b = 0; b < buildings; ++b) {
      const auto c = building_costs(scenario, prices, sol->mode, *sol, b);
      mc.total.electricity_eur += c.electricity_eur;
      mc.total.ev_revenue_eur += c.ev_revenue_eur;
      mc.total.objective_eur += c.objective_eur;
      mc.buildings.push_back(c);
    }
    const double tol = 1e-6 * std::max(1.0, std::fabs(sol->objective) / 1e3);
    if (std::fabs(mc.total.objective_eur - sol->objective) > tol) {
      throw ReportError(fmt::format("{}: recomputed objective {:.9f} differs from solver objective {:.9f}",
                                    to_string(sol->mode), mc.total.objective_eur, sol->objective));
    }
    out.modes.push_back(std::move(mc));
  }
  return out;
}

std::vector<double> net_grid_kw(const CommunityScenario& scenario, const solver::BuildingDispatch& d, int b) {
  const auto& nl = scenario.buildings.at(b).net_load;
  std::vector<double> out(static_cast<std::size_t>(scenario.time.steps));
  for (int h = 0; h < scenario.time.steps; ++h) {
    double v = nl.deficit_kw[h] - nl.surplus_kw[h] + d.bs_charge_kw[h] - d.bs_discharge_kw[h] +
               d.comm_export_kw[h] - d.comm_import_kw[h];
    for (std::size_t n = 0; n < d.ev_charge_kw.size(); ++n) v += d.ev_charge_kw[n][h] - d.ev_discharge_kw[n][h];
    out[h] = v;
  }
  return out;
}

void export_dispatch_csv(std::ostream& out, const CommunityScenario& scenario,
                         const solver::DispatchSolution& solution) {
  out << "step,building,net_grid_kw,bs_charge_kw,bs_discharge_kw,ev_charge_kw,ev_discharge_kw,comm_export_kw,"
         "comm_import_kw,soc\n";
  const int buildings = static_cast<int>(scenario.buildings.size());
  std::vector<std::vector<double>> grid;
  for (int b = 0; b < buildings; ++b) grid.push_back(net_grid_kw(scenario, solution.buildings.at(b), b));
  for (int h = 0; h < scenario.time.steps; ++h) {
    for (int b = 0; b < buildings; ++b) {
      const auto& d = solution.buildings[b];
      double ev_ch = 0.0;
      double ev_dis = 0.0;
      for (std::size_t n = 0; n < d.ev_charge_kw.size(); ++n) {
        ev_ch += d.ev_charge_kw[n][h];
        ev_dis += d.ev_discharge_kw[n][h];
      }
      out << h << ',' << scenario.buildings[b].name << ',' << fixed(grid[b][h], 6) << ','
          << fixed(d.bs_charge_kw[h], 6) << ',' << fixed(d.bs_discharge_kw[h], 6) << ',' << fixed(ev_ch, 6) << ','
          << fixed(ev_dis, 6) << ',' << fixed(d.comm_export_kw[h], 6) << ',' << fixed(d.comm_import_kw[h], 6) << ','
          << fixed(d.soc[h], 6) << '\n';
    }
  }
}

void export_prices_csv(std::ostream& out, const tariff::CommunityPrices& prices) {
  out << "step,ratio,c_ec_eur_mwh,c_ic_eur_mwh\n";
  for (std::size_t h = 0; h < prices.surplus_ratio.size(); ++h) {
    out << h << ',' << fixed(prices.surplus_ratio[h], 6) << ',' << fixed(prices.export_eur_per_kwh[h] * 1e3, 6)
        << ',' << fixed(prices.import_eur_per_kwh[h] * 1e3, 6) << '\n';
  }
}

void write_cost_table(std::ostream& out, const CostBreakdown& costs) {
  std::size_t width = 8;
  for (const auto& n : costs.building_names) width = std::max(width, n.size());
  out << fmt::format("{:<{}}  {:>12}", "building", width, "baseline");
  for (const auto& m : costs.modes) {
    const auto* name = to_string(m.mode);
    out << fmt::format("  {:>12}  {:>12}  {:>12}", fmt::format("{}.C_E", name), fmt::format("{}.C_EV", name),
                       fmt::format("{}.obj", name));
  }
  out << '\n';
  auto row = [&](const std::string& label, double base, auto pick) {
    out << fmt::format("{:<{}}  {:>12}", label, width, fixed(base, 2));
    for (const auto& m : costs.modes) {
      const Costs& c = pick(m);
      out << fmt::format("  {:>12}  {:>12}  {:>12}", fixed(c.electricity_eur, 2), fixed(c.ev_revenue_eur, 2),
                         fixed(c.objective_eur, 2));
    }
    out << '\n';
  };
  for (std::size_t b = 0; b < costs.building_names.size(); ++b) {
    row(costs.building_names[b], costs.baseline_electricity_eur[b],
        [b](const ModeCosts& m) -> const Costs& { return m.buildings[b]; });
  }
  row("total", costs.baseline_electricity_total_eur, [](const ModeCosts& m) -> const Costs& { return m.total; });
  out << '\n';
  for (const auto& m : costs.modes) {
    if (m.mode == RunMode::kBaseline) continue;
    if (auto e = costs.electricity_saving_vs_baseline(m.mode)) {
      out << fmt::format("{} electricity vs baseline: {}%\n", to_string(m.mode), fixed(*e, 2));
    }
    if (auto o = costs.objective_saving_vs_baseline(m.mode)) {
      out << fmt::format("{} objective vs baseline electricity: {}%\n", to_string(m.mode), fixed(*o, 2));
    }
  }
  if (auto e = costs.electricity_saving_vs_individual()) {
    out << fmt::format("community electricity vs individual: {}%\n", fixed(*e, 2));
  }
  if (auto o = costs.objective_saving_vs_individual()) {
    out << fmt::format("community objective vs individual: {}%\n", fixed(*o, 2));
  }
  out << fmt::format("mean community export tariff: {} EUR/MWh\n",
                     fixed(costs.mean_export_tariff_eur_per_kwh * 1e3, 2));
  out << fmt::format("mean community import tariff: {} EUR/MWh\n",
                     fixed(costs.mean_import_tariff_eur_per_kwh * 1e3, 2));
}

nlohmann::json cost_json(const CostBreakdown& costs) {
  using nlohmann::json;
  auto costs_obj = [](const Costs& c) {
    return json{{"electricity_eur", c.electricity_eur},
                {"ev_revenue_eur", c.ev_revenue_eur},
                {"objective_eur", c.objective_eur}};
  };
  json doc;
  json buildings = json::array();
  for (std::size_t b = 0; b < costs.building_names.size(); ++b) {
    json entry{{"name", costs.building_names[b]}, {"baseline_electricity_eur", costs.baseline_electricity_eur[b]}};
    for (const auto& m : costs.modes) entry[to_string(m.mode)] = costs_obj(m.buildings[b]);
    buildings.push_back(std::move(entry));
  }
  doc["buildings"] = std::move(buildings);
  json totals{{"baseline_electricity_eur", costs.baseline_electricity_total_eur}};
  for (const auto& m : costs.modes) {
    auto t = costs_obj(m.total);
    t["solver_objective_eur"] = m.solver_objective_eur;
    t["status"] = solver::to_string(m.status);
    totals[to_string(m.mode)] = std::move(t);
  }
  doc["totals"] = std::move(totals);
  json deltas = json::object();
  auto put = [&](const std::string& key, std::optional<double> v) {
    if (v) deltas[key] = *v;
  };
  for (const auto& m : costs.modes) {
    if (m.mode == RunMode::kBaseline) continue;
    put(fmt::format("{}_electricity_vs_baseline_pct", to_string(m.mode)), costs.electricity_saving_vs_baseline(m.mode));
    put(fmt::format("{}_objective_vs_baseline_pct", to_string(m.mode)), costs.objective_saving_vs_baseline(m.mode));
  }
  put("community_electricity_vs_individual_pct", costs.electricity_saving_vs_individual());
  put("community_objective_vs_individual_pct", costs.objective_saving_vs_individual());
  doc["savings"] = std::move(deltas);
  doc["prices"] = {{"mean_export_eur_mwh", costs.mean_export_tariff_eur_per_kwh * 1e3},
                   {"mean_import_eur_mwh", costs.mean_import_tariff_eur_per_kwh * 1e3}};
  return doc;
}

}  // namespace temgrid::report
