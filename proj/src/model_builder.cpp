#include "temgrid/model_builder.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "temgrid/ev_contract.hpp"

namespace temgrid::model {

namespace {
constexpr VarKind kStepKinds[] = {
    VarKind::kGridImport, VarKind::kGridExport,  VarKind::kBsCharge,
    VarKind::kBsDischarge, VarKind::kSoc,        VarKind::kCommExport,
    VarKind::kCommImport,  VarKind::kCommExportRelief, VarKind::kCommImportRelief,
};
constexpr const char* kShortNames[] = {"gi", "ge", "bsc", "bsd", "soc", "cex", "cim", "rex", "rim", "evc", "evd"};
}  // namespace

const char* to_string(VarKind kind) {
  static constexpr const char* names[] = {"grid_import", "grid_export", "bs_charge",  "bs_discharge",
                                          "soc",         "comm_export", "comm_import", "comm_export_relief",
                                          "comm_import_relief", "ev_charge", "ev_discharge"};
  return names[static_cast<int>(kind)];
}

VariableCatalog::VariableCatalog(const CommunityScenario& scenario) : steps_(scenario.time.steps) {
  for (int b = 0; b < static_cast<int>(scenario.buildings.size()); ++b) {
    building_offset_.push_back(size());
    const int sessions = static_cast<int>(scenario.buildings[b].sessions.size());
    session_count_.push_back(sessions);
    for (int h = 0; h < steps_; ++h) {
      for (VarKind kind : kStepKinds) vars_.push_back({kind, b, -1, h});
    }
    for (int n = 0; n < sessions; ++n) {
      for (int h = 0; h < steps_; ++h) {
        vars_.push_back({VarKind::kEvCharge, b, n, h});
        vars_.push_back({VarKind::kEvDischarge, b, n, h});
      }
    }
  }
}

int VariableCatalog::index(VarKind kind, int building, int step) const {
  const int k = static_cast<int>(kind);
  if (k >= kPerStepKinds) throw BuildError("ev variables need a session index");
  return building_offset_.at(building) + step * kPerStepKinds + k;
}

int VariableCatalog::ev_index(VarKind kind, int building, int session, int step) const {
  if (kind != VarKind::kEvCharge && kind != VarKind::kEvDischarge) throw BuildError("not an ev variable");
  const int base = building_offset_.at(building) + steps_ * kPerStepKinds + session * steps_ * 2;
  return base + step * 2 + (kind == VarKind::kEvDischarge ? 1 : 0);
}

std::string VariableCatalog::name(int var) const {
  const auto& v = info(var);
  const char* prefix = kShortNames[static_cast<int>(v.kind)];
  if (v.session >= 0) return fmt::format("{}_b{}_n{}_h{}", prefix, v.building, v.session, v.step);
  return fmt::format("{}_b{}_h{}", prefix, v.building, v.step);
}

ModelBuilder::ModelBuilder(const CommunityScenario& scenario, const tariff::CommunityPrices& prices, RunMode mode)
    : scenario_(scenario), prices_(prices) {
  const int steps = scenario.time.steps;
  for (const auto& b : scenario.buildings) {
    if (b.net_load.deficit_kw.size() != static_cast<std::size_t>(steps) ||
        b.net_load.surplus_kw.size() != static_cast<std::size_t>(steps)) {
      throw BuildError(fmt::format("building {}: net load length differs from {} steps", b.name, steps));
    }
  }
  const auto& tb = scenario.tariffs;
  for (const auto* series : {&tb.grid_import_eur_per_kwh, &tb.grid_export_eur_per_kwh, &tb.grid_use_eur_per_kwh,
                             &tb.charge_eur_per_hour, &tb.discharge_eur_per_hour}) {
    if (series->size() != static_cast<std::size_t>(steps)) throw BuildError("tariff series length differs from steps");
  }
  if (mode == RunMode::kCommunity &&
      (prices.export_eur_per_kwh.size() != static_cast<std::size_t>(steps) ||
       prices.import_eur_per_kwh.size() != static_cast<std::size_t>(steps))) {
    throw BuildError("community prices do not match the time grid");
  }

  model_.mode = mode;
  model_.catalog = VariableCatalog(scenario);
  model_.building_constant.assign(scenario.buildings.size(), 0.0);
  const auto& cat = model_.catalog;
  const bool flexible = mode != RunMode::kBaseline;
  const bool community = mode == RunMode::kCommunity;
  const bool verbatim = scenario.options.eq2_verbatim;

  for (int j = 0; j < cat.size(); ++j) {
    const auto& v = cat.info(j);
    const auto& building = scenario.buildings[v.building];
    const auto& bat = building.battery;
    double upper = 0.0;
    double lower = 0.0;
    switch (v.kind) {
      case VarKind::kGridImport:
      case VarKind::kGridExport:
        upper = verbatim ? 0.0 : lp::kInfinity;
        break;
      case VarKind::kBsCharge:
        upper = flexible && bat.capacity_kwh > 0.0 ? bat.max_charge_kw : 0.0;
        break;
      case VarKind::kBsDischarge:
        upper = flexible && bat.capacity_kwh > 0.0 ? bat.max_discharge_kw : 0.0;
        break;
      case VarKind::kSoc:
        if (bat.capacity_kwh > 0.0) {
          lower = bat.soc_min;
          upper = bat.soc_max;
        } else {
          lower = upper = bat.soc_initial;
        }
        break;
      case VarKind::kCommExport:
      case VarKind::kCommImport:
      case VarKind::kCommExportRelief:
      case VarKind::kCommImportRelief:
        upper = community ? lp::kInfinity : 0.0;
        break;
      case VarKind::kEvCharge: {
        const auto& s = building.sessions[v.session];
        const bool parked = s.parked_at(v.step, scenario.time.step_hours);
        upper = flexible && parked ? s.max_charge_kw : 0.0;
        break;
      }
      case VarKind::kEvDischarge: {
        const auto& s = building.sessions[v.session];
        const bool parked = s.parked_at(v.step, scenario.time.step_hours);
        upper = flexible && parked && s.max_discharge_hours > 0.0 ? s.max_discharge_kw : 0.0;
        break;
      }
    }
    model_.lp.add_column(cat.name(j), 0.0, lower, upper);
  }
}

void ModelBuilder::add_row(lp::Row row) {
  if (row.terms.empty()) {
    const bool ok = (row.relation == lp::Relation::kLessEqual && 0.0 <= row.rhs) ||
                    (row.relation == lp::Relation::kGreaterEqual && 0.0 >= row.rhs) ||
                    (row.relation == lp::Relation::kEqual && row.rhs == 0.0);
    if (!ok) throw BuildError(fmt::format("row {} has no terms and cannot be satisfied", row.name));
    return;
  }
  model_.lp.add_row(std::move(row));
}

double ModelBuilder::period_coef(double max_kw) const { return scenario_.time.step_hours / max_kw; }

void ModelBuilder::add_power_balance(int b) {
  const auto& cat = model_.catalog;
  const auto& building = scenario_.buildings.at(b);
  const auto& tb = scenario_.tariffs;
  const double dh = scenario_.time.step_hours;
  const bool community = model_.mode == RunMode::kCommunity;
  auto& cols = model_.lp.columns;
  const int sessions = cat.sessions(b);

  for (int h = 0; h < cat.steps(); ++h) {
    const double l_plus = building.net_load.deficit_kw[h];
    const double l_minus = building.net_load.surplus_kw[h];
    const double c_ig = tb.grid_import_eur_per_kwh[h];
    const double c_eg = tb.grid_export_eur_per_kwh[h];
    const int gi = cat.index(VarKind::kGridImport, b, h);
    const int ge = cat.index(VarKind::kGridExport, b, h);
    const int bsc = cat.index(VarKind::kBsCharge, b, h);
    const int bsd = cat.index(VarKind::kBsDischarge, b, h);
    const int cex = cat.index(VarKind::kCommExport, b, h);
    const int cim = cat.index(VarKind::kCommImport, b, h);

    if (community) {
      cols[cim].cost += dh * prices_.import_eur_per_kwh[h];
      cols[cex].cost += dh * prices_.export_eur_per_kwh[h];
    }

    if (scenario_.options.eq2_verbatim) {
      // Residual form: import residual priced at C_IG, export residual at
      // C_EG, with no balance row.
      const double constant = dh * (l_plus * c_ig + l_minus * c_eg);
      model_.lp.objective_constant += constant;
      model_.building_constant[b] += constant;
      cols[cim].cost -= dh * c_ig;
      cols[cex].cost -= dh * c_eg;
      cols[bsd].cost -= dh * c_ig;
      cols[bsc].cost -= dh * c_eg;
      for (int n = 0; n < sessions; ++n) {
        cols[cat.ev_index(VarKind::kEvDischarge, b, n, h)].cost -= dh * c_ig;
        cols[cat.ev_index(VarKind::kEvCharge, b, n, h)].cost -= dh * c_eg;
      }
      continue;
    }

    cols[gi].cost += dh * c_ig;
    cols[ge].cost += dh * c_eg;
    lp::Row row{fmt::format("bal_b{}_h{}", b, h), {}, lp::Relation::kEqual, l_plus - l_minus,
                lp::RowFamily::kPowerBalance};
    row.terms = {{gi, 1.0}, {ge, -1.0}, {bsc, -1.0}, {bsd, 1.0}};
    for (int n = 0; n < sessions; ++n) {
      row.terms.push_back({cat.ev_index(VarKind::kEvCharge, b, n, h), -1.0});
      row.terms.push_back({cat.ev_index(VarKind::kEvDischarge, b, n, h), 1.0});
    }
    row.terms.push_back({cex, -1.0});
    row.terms.push_back({cim, 1.0});
    add_row(std::move(row));
  }
}

void ModelBuilder::add_ev_constraints(int b, int n) {
  if (model_.mode == RunMode::kBaseline) return;
  const auto& cat = model_.catalog;
  const auto& s = scenario_.buildings.at(b).sessions.at(n);
  const auto& tb = scenario_.tariffs;
  auto& cols = model_.lp.columns;
  const double dh = scenario_.time.step_hours;
  const int first = s.arrival_step;
  const int last = std::min(s.departure_step(dh), cat.steps());

  // Parking revenue and the full-idle reward do not depend on decisions.
  const double constant = -s.parking_hours * (tb.parking_eur_per_hour + tb.flexibility_eur_per_hour);
  model_.lp.objective_constant += constant;
  model_.building_constant[b] += constant;

  const bool can_charge = s.max_charge_kw > 0.0;
  const bool can_discharge = s.max_discharge_kw > 0.0 && s.max_discharge_hours > 0.0;
  const double up = can_charge ? period_coef(s.max_charge_kw) : 0.0;
  const double down = can_discharge ? period_coef(s.max_discharge_kw) : 0.0;
  const double comp = ev::compensation_factor(s.charger_efficiency, scenario_.options.compensation);

  lp::Row total{fmt::format("evtot_b{}_n{}", b, n), {}, lp::Relation::kEqual, s.requested_charge_hours,
                lp::RowFamily::kEvTotalCharge};
  lp::Row cap{fmt::format("evcap_b{}_n{}", b, n), {}, lp::Relation::kLessEqual, s.max_discharge_hours,
              lp::RowFamily::kEvDischargeCap};
  lp::Row idle{fmt::format("evidle_b{}_n{}", b, n), {}, lp::Relation::kLessEqual, s.parking_hours,
               lp::RowFamily::kEvIdle};
  std::vector<lp::Term> prefix;

  for (int h = first; h < last; ++h) {
    const int ch = cat.ev_index(VarKind::kEvCharge, b, n, h);
    const int dis = cat.ev_index(VarKind::kEvDischarge, b, n, h);
    if (can_charge) {
      cols[ch].cost -= up * (tb.charge_eur_per_hour[h] - tb.flexibility_eur_per_hour);
      total.terms.push_back({ch, up});
      idle.terms.push_back({ch, up});
    }
    if (can_discharge) {
      cols[dis].cost -= down * (tb.discharge_eur_per_hour[h] - tb.flexibility_eur_per_hour);
      total.terms.push_back({dis, -comp * down});
      cap.terms.push_back({dis, down});
      idle.terms.push_back({dis, down});
      if (can_charge) prefix.push_back({ch, -up});
      prefix.push_back({dis, down});
      add_row({fmt::format("evpre_b{}_n{}_h{}", b, n, h), prefix, lp::Relation::kLessEqual, 0.0,
               lp::RowFamily::kEvPrefix});
      if (can_charge) model_.complementarity_pairs.push_back({ch, dis});
    }
  }
  add_row(std::move(total));
  add_row(std::move(cap));
  add_row(std::move(idle));
}

void ModelBuilder::add_storage_constraints(int b) {
  const auto& cat = model_.catalog;
  const auto& bat = scenario_.buildings.at(b).battery;
  const double dh = scenario_.time.step_hours;
  if (bat.capacity_kwh <= 0.0) {
    if (bat.max_charge_kw > 0.0 || bat.max_discharge_kw > 0.0) {
      throw BuildError(fmt::format("building {}: battery has power but zero capacity", scenario_.buildings[b].name));
    }
    return;
  }
  const double e = bat.capacity_kwh;
  const double eta = bat.one_way_efficiency;

  for (int h = 0; h < cat.steps(); ++h) {
    const int soc = cat.index(VarKind::kSoc, b, h);
    const int ch = cat.index(VarKind::kBsCharge, b, h);
    const int dis = cat.index(VarKind::kBsDischarge, b, h);
    const int prev = h > 0 ? cat.index(VarKind::kSoc, b, h - 1) : -1;

    lp::Row rec{fmt::format("soc_b{}_h{}", b, h), {{soc, 1.0}, {ch, -eta * dh / e}, {dis, dh / e}},
                lp::Relation::kEqual, 0.0, lp::RowFamily::kSocRecursion};
    lp::Row head_up{fmt::format("hdu_b{}_h{}", b, h), {{ch, eta * dh}}, lp::Relation::kLessEqual,
                    bat.soc_max * e, lp::RowFamily::kSocHeadroom};
    lp::Row head_down{fmt::format("hdd_b{}_h{}", b, h), {{dis, dh}}, lp::Relation::kLessEqual,
                      -bat.soc_min * e, lp::RowFamily::kSocHeadroom};
    if (prev >= 0) {
      rec.terms.push_back({prev, -1.0});
      head_up.terms.push_back({prev, e});
      head_down.terms.push_back({prev, -e});
    } else {
      rec.rhs = bat.soc_initial;
      head_up.rhs -= e * bat.soc_initial;
      head_down.rhs += e * bat.soc_initial;
    }
    add_row(std::move(rec));
    add_row(std::move(head_up));
    add_row(std::move(head_down));
    if (model_.mode != RunMode::kBaseline) model_.complementarity_pairs.push_back({ch, dis});
  }
  if (scenario_.options.terminal_soc == TerminalSoc::kRestore) {
    add_row({fmt::format("term_b{}", b), {{cat.index(VarKind::kSoc, b, cat.steps() - 1), 1.0}},
             lp::Relation::kGreaterEqual, bat.soc_initial, lp::RowFamily::kSocTerminal});
  }
}

void ModelBuilder::add_community_constraints() {
  if (model_.mode != RunMode::kCommunity) return;
  const auto& cat = model_.catalog;
  for (int h = 0; h < cat.steps(); ++h) {
    lp::Row balance{fmt::format("cbal_h{}", h), {}, lp::Relation::kEqual, 0.0, lp::RowFamily::kCommunityBalance};
    for (int b = 0; b < cat.buildings(); ++b) {
      const auto& nl = scenario_.buildings[b].net_load;
      const int cex = cat.index(VarKind::kCommExport, b, h);
      const int cim = cat.index(VarKind::kCommImport, b, h);
      const int rex = cat.index(VarKind::kCommExportRelief, b, h);
      const int rim = cat.index(VarKind::kCommImportRelief, b, h);
      const int bsc = cat.index(VarKind::kBsCharge, b, h);
      const int bsd = cat.index(VarKind::kBsDischarge, b, h);

      // Import cap: c_imp <= L+ - bs_dis - sum ev_dis + sum ev_ch, relieved
      // only while the building does not import (pair c_imp/relief).
      lp::Row import_cap{fmt::format("cimcap_b{}_h{}", b, h), {{cim, 1.0}, {bsd, 1.0}}, lp::Relation::kLessEqual,
                         nl.deficit_kw[h], lp::RowFamily::kCommunityCap};
      // Export cap: c_exp <= L- - bs_ch - sum ev_ch, same relief scheme.
      lp::Row export_cap{fmt::format("cexcap_b{}_h{}", b, h), {{cex, 1.0}, {bsc, 1.0}}, lp::Relation::kLessEqual,
                         nl.surplus_kw[h], lp::RowFamily::kCommunityCap};
      for (int n = 0; n < cat.sessions(b); ++n) {
        const int ch = cat.ev_index(VarKind::kEvCharge, b, n, h);
        const int dis = cat.ev_index(VarKind::kEvDischarge, b, n, h);
        import_cap.terms.push_back({dis, 1.0});
        import_cap.terms.push_back({ch, -1.0});
        export_cap.terms.push_back({ch, 1.0});
      }
      // Both caps imply limits that hold whether or not the flow is active:
      // c_exp <= L- and c_imp <= L+ + sum ev_ch.
      lp::Row import_limit{fmt::format("cimlim_b{}_h{}", b, h), {{cim, 1.0}}, lp::Relation::kLessEqual,
                           nl.deficit_kw[h], lp::RowFamily::kCommunityCap};
      for (int n = 0; n < cat.sessions(b); ++n) {
        import_limit.terms.push_back({cat.ev_index(VarKind::kEvCharge, b, n, h), -1.0});
      }
      auto& export_col = model_.lp.columns[cex];
      export_col.upper = std::min(export_col.upper, nl.surplus_kw[h]);

      import_cap.terms.push_back({rim, -1.0});
      export_cap.terms.push_back({rex, -1.0});
      add_row(std::move(import_cap));
      add_row(std::move(export_cap));
      add_row(std::move(import_limit));

      balance.terms.push_back({cex, 1.0});
      balance.terms.push_back({cim, -1.0});
      model_.complementarity_pairs.push_back({cex, cim});
      model_.complementarity_pairs.push_back({cim, rim});
      model_.complementarity_pairs.push_back({cex, rex});
    }
    add_row(std::move(balance));
  }
}

MilpModel ModelBuilder::take() && { return std::move(model_); }

MilpModel build(const CommunityScenario& scenario, const tariff::CommunityPrices& prices, RunMode mode) {
  ModelBuilder builder(scenario, prices, mode);
  const int buildings = static_cast<int>(scenario.buildings.size());
  for (int b = 0; b < buildings; ++b) {
    builder.add_power_balance(b);
    builder.add_storage_constraints(b);
    for (int n = 0; n < static_cast<int>(scenario.buildings[b].sessions.size()); ++n) {
      builder.add_ev_constraints(b, n);
    }
  }
  builder.add_community_constraints();
  return std::move(builder).take();
}

int count_free_variables(const MilpModel& model) {
  int count = 0;
  for (const auto& c : model.lp.columns) count += c.upper > c.lower ? 1 : 0;
  return count;
}

double baseline_cost(const CommunityScenario& scenario) {
  const auto& tb = scenario.tariffs;
  double total = 0.0;
  for (const auto& b : scenario.buildings) {
    for (int h = 0; h < scenario.time.steps; ++h) {
      total += scenario.time.step_hours * (b.net_load.deficit_kw[h] * tb.grid_import_eur_per_kwh[h] +
                                           b.net_load.surplus_kw[h] * tb.grid_export_eur_per_kwh[h]);
    }
  }
  return total;
}

}  // namespace temgrid::model
