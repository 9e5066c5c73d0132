#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "random_scenarios.hpp"
#include "temgrid/pipeline.hpp"
#include "temgrid/reporting.hpp"
#include "temgrid/scenario_io.hpp"

using namespace temgrid;

namespace {

const std::vector<RunMode> kAllModes{RunMode::kBaseline, RunMode::kIndividual, RunMode::kCommunity};

const PipelineResult& fixture_result() {
  static const PipelineResult result = run_pipeline(io::bundled_scenario(), kAllModes);
  return result;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

// Electricity and EV revenue of one building straight from the flows.
std::pair<double, double> recompute(const CommunityScenario& sc, const tariff::CommunityPrices& prices,
                                    const solver::BuildingDispatch& d, int b) {
  const auto& tb = sc.tariffs;
  const double dh = sc.time.step_hours;
  double electricity = 0.0;
  for (int h = 0; h < sc.time.steps; ++h) {
    electricity += dh * (tb.grid_import_eur_per_kwh[h] * d.grid_import_kw[h] +
                         tb.grid_export_eur_per_kwh[h] * d.grid_export_kw[h]);
    if (!prices.export_eur_per_kwh.empty()) {
      electricity += dh * (prices.export_eur_per_kwh[h] * d.comm_export_kw[h] +
                           prices.import_eur_per_kwh[h] * d.comm_import_kw[h]);
    }
  }
  double revenue = 0.0;
  for (std::size_t n = 0; n < sc.buildings[b].sessions.size(); ++n) {
    const auto& s = sc.buildings[b].sessions[n];
    double up = 0.0;
    double down = 0.0;
    double variable = 0.0;
    for (int h = 0; h < sc.time.steps; ++h) {
      const double u = d.ev_charge_kw[n][h] / s.max_charge_kw * dh;
      const double v = s.max_discharge_kw > 0.0 ? d.ev_discharge_kw[n][h] / s.max_discharge_kw * dh : 0.0;
      up += u;
      down += v;
      variable += u * tb.charge_eur_per_hour[h] + v * tb.discharge_eur_per_hour[h];
    }
    revenue += s.parking_hours * tb.parking_eur_per_hour + (s.parking_hours - up - down) * tb.flexibility_eur_per_hour +
               variable;
  }
  return {electricity, revenue};
}

}  // namespace

TEST(Reporting, DispatchCsvShape) {
  const auto& r = fixture_result();
  const auto sc = io::bundled_scenario();
  for (const auto& run : r.runs) {
    std::ostringstream out;
    report::export_dispatch_csv(out, sc, run.solution);
    const auto rows = read_csv(out.str());
    ASSERT_EQ(rows.size(), 1u + 24u * 4u);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
              "step,building,net_grid_kw,bs_charge_kw,bs_discharge_kw,ev_charge_kw,ev_discharge_kw,comm_export_kw,"
              "comm_import_kw,soc");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      ASSERT_EQ(rows[i].size(), 10u);
      const auto& bat = sc.buildings[(i - 1) % 4].battery;
      const double soc = std::stod(rows[i][9]);
      EXPECT_GE(soc, bat.soc_min - 1e-6);
      EXPECT_LE(soc, bat.soc_max + 1e-6);
    }
  }
}

TEST(Reporting, PricesCsvWeightedExportInBandForPublishedTariffs) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    testsupport::RandomScenarioConfig cfg;
    cfg.buildings = 2 + trial % 4;
    cfg.steps = 24;
    auto sc = testsupport::random_scenario(gen, cfg);
    sc.tariffs.grid_import_eur_per_kwh.assign(24, 0.1228);
    sc.tariffs.grid_export_eur_per_kwh.assign(24, -0.0358);
    sc.tariffs.grid_use_eur_per_kwh.assign(24, 0.050);
    const auto prices = tariff::price_community(sc);
    std::ostringstream out;
    report::export_prices_csv(out, prices);
    const auto rows = read_csv(out.str());
    ASSERT_EQ(rows.size(), 25u);
    const auto surplus = tariff::total_surplus_kw(sc);
    double num = 0.0;
    double den = 0.0;
    for (int h = 0; h < 24; ++h) {
      num += surplus[h] * std::stod(rows[h + 1][2]);
      den += surplus[h];
    }
    if (den <= 0.0) continue;
    EXPECT_GE(num / den, -72.8 - 1e-6);
    EXPECT_LE(num / den, -35.8 + 1e-6);
  }
}

TEST(Reporting, RecomputedCostsMatchIndependentSum) {
  const auto& r = fixture_result();
  const auto sc = io::bundled_scenario();
  for (const auto& run : r.runs) {
    const auto* mc = r.costs.find(run.mode);
    ASSERT_NE(mc, nullptr);
    double total_objective = 0.0;
    for (int b = 0; b < 4; ++b) {
      const auto [el, rev] = recompute(sc, run.mode == RunMode::kCommunity ? r.prices : tariff::CommunityPrices{},
                                       run.solution.buildings[b], b);
      EXPECT_NEAR(mc->buildings[b].electricity_eur, el, 1e-6);
      EXPECT_NEAR(mc->buildings[b].ev_revenue_eur, rev, 1e-6);
      EXPECT_NEAR(mc->buildings[b].objective_eur, el - rev, 1e-9);
      total_objective += el - rev;
    }
    EXPECT_NEAR(total_objective, run.solution.objective, 1e-6);
    EXPECT_NEAR(mc->total.objective_eur, mc->solver_objective_eur, 1e-6);
  }
}

TEST(Reporting, ModeOrderingAndBaselineRevenue) {
  const auto& c = fixture_result().costs;
  const auto* base = c.find(RunMode::kBaseline);
  const auto* ind = c.find(RunMode::kIndividual);
  const auto* com = c.find(RunMode::kCommunity);
  ASSERT_TRUE(base && ind && com);
  EXPECT_EQ(base->total.ev_revenue_eur, 0.0);
  for (const auto& b : base->buildings) EXPECT_EQ(b.ev_revenue_eur, 0.0);
  EXPECT_NEAR(base->total.electricity_eur, c.baseline_electricity_total_eur, 1e-9);
  EXPECT_LE(com->total.objective_eur, ind->total.objective_eur + 1e-6);
  ASSERT_TRUE(c.electricity_saving_vs_individual().has_value());
  EXPECT_GT(*c.electricity_saving_vs_individual(), 0.0);
  EXPECT_NEAR(*c.objective_saving_vs_baseline(RunMode::kCommunity),
              100.0 * (base->total.objective_eur - com->total.objective_eur) / std::abs(base->total.objective_eur),
              1e-9);
}

TEST(Reporting, SummarizeRejectsMismatches) {
  const auto& r = fixture_result();
  const auto sc = io::bundled_scenario();
  const auto& community = r.runs[2].solution;
  EXPECT_THROW(report::summarize(sc, r.prices, {&community, &community}), report::ReportError);

  auto wrong = community;
  wrong.objective += 1.0;
  EXPECT_THROW(report::summarize(sc, r.prices, {&wrong}), report::ReportError);

  auto fewer = community;
  fewer.buildings.pop_back();
  EXPECT_THROW(report::summarize(sc, r.prices, {&fewer}), report::ReportError);
}

TEST(Reporting, CostJsonAndTable) {
  const auto& c = fixture_result().costs;
  const auto j = report::cost_json(c);
  EXPECT_EQ(j["buildings"].size(), 4u);
  EXPECT_TRUE(j["totals"].contains("community"));
  EXPECT_TRUE(j["savings"].contains("community_electricity_vs_individual_pct"));
  std::ostringstream table;
  report::write_cost_table(table, c);
  EXPECT_NE(table.str().find("community.obj"), std::string::npos);
  EXPECT_NE(table.str().find("total"), std::string::npos);
}

TEST(Reporting, FixedFormatting) {
  EXPECT_EQ(report::fixed(-0.0, 2), "0.00");
  EXPECT_EQ(report::fixed(-0.0004, 3), "0.000");
  EXPECT_EQ(report::fixed(1.23456, 2), "1.23");
  EXPECT_EQ(report::fixed(-2.5, 1), "-2.5");
}

TEST(Pipeline, ParallelAndSerialAgree) {
  const auto sc = io::bundled_scenario();
  const auto a = run_pipeline(sc, kAllModes, kernels::Backend::kOpenMP, true);
  const auto b = run_pipeline(sc, kAllModes, kernels::Backend::kSerial, false);
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_EQ(a.runs[i].solution.objective, b.runs[i].solution.objective);
    EXPECT_EQ(a.runs[i].solution.values, b.runs[i].solution.values);
  }
}
