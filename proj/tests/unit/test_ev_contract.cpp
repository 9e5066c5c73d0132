#include <gtest/gtest.h>

#include <random>

#include "temgrid/ev_contract.hpp"

using namespace temgrid;
using namespace temgrid::ev;

namespace {

EVSession eight_hour_session() {
  EVSession s;
  s.id = "ev";
  s.arrival_step = 0;
  s.parking_hours = 8.0;
  s.requested_charge_hours = 2.0;
  s.max_discharge_hours = 0.5;
  s.max_charge_kw = 10.0;
  s.max_discharge_kw = 10.0;
  s.charger_efficiency = 0.93;
  return s;
}

TariffBook flat_tariffs(int steps) {
  TariffBook tb;
  tb.parking_eur_per_hour = 0.5;
  tb.flexibility_eur_per_hour = -0.5;
  tb.charge_eur_per_hour.assign(steps, 2.0);
  tb.discharge_eur_per_hour.assign(steps, -3.0);
  tb.grid_import_eur_per_kwh.assign(steps, 0.1228);
  tb.grid_export_eur_per_kwh.assign(steps, -0.0358);
  tb.grid_use_eur_per_kwh.assign(steps, 0.05);
  return tb;
}

}  // namespace

TEST(UsedPeriod, Examples) {
  EXPECT_DOUBLE_EQ(used_period(10.0, 10.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(used_period(5.0, 10.0, 0.25), 0.125);
  EXPECT_DOUBLE_EQ(used_period(0.0, 10.0, 1.0), 0.0);
}

TEST(UsedPeriod, ZeroCapWithPowerIsAnError) {
  EXPECT_THROW(used_period(1.0, 0.0, 1.0), DomainError);
  EXPECT_DOUBLE_EQ(used_period(0.0, 0.0, 1.0), 0.0);
}

TEST(RequiredTotalCharge, Examples) {
  EXPECT_DOUBLE_EQ(required_total_charge_hours(2.0, 0.0, 0.93, CompensationMode::kOneWay), 2.0);
  EXPECT_NEAR(required_total_charge_hours(2.0, 0.5, 0.93, CompensationMode::kOneWay), 2.0 + 0.5 / 0.93,
              1e-12);
  EXPECT_NEAR(required_total_charge_hours(2.0, 0.5, 0.93, CompensationMode::kOneWay), 2.5376, 1e-4);
  EXPECT_NEAR(required_total_charge_hours(2.0, 0.5, 0.93, CompensationMode::kRoundTrip), 2.0 + 0.5 / 0.8649,
              1e-12);
  EXPECT_NEAR(required_total_charge_hours(2.0, 0.5, 0.93, CompensationMode::kRoundTrip), 2.5781, 1e-4);
}

TEST(SessionRevenue, ChargeOnly) {
  const TimeGrid time{1.0, 8, 0.0};
  const auto s = eight_hour_session();
  const auto ledger = make_ledger(s, std::vector<double>{1, 1, 0, 0, 0, 0, 0, 0}, std::vector<double>(8, 0.0));
  // 8 * 0.5 + 6 * (-0.5) + 2 * 2
  EXPECT_NEAR(session_revenue(s, ledger, flat_tariffs(8), time), 5.00, 1e-9);
}

TEST(SessionRevenue, WithCompensatedDischarge) {
  const TimeGrid time{1.0, 8, 0.0};
  const auto s = eight_hour_session();
  const double total_charge = 2.0 + 0.5 / 0.93;
  std::vector<double> up{1.0, 1.0, total_charge - 2.0, 0, 0, 0, 0, 0};
  std::vector<double> down{0, 0, 0, 0.5, 0, 0, 0, 0};
  const auto ledger = make_ledger(s, up, down);
  const double expected = 8 * 0.5 + (8 - total_charge - 0.5) * -0.5 + total_charge * 2.0 + 0.5 * -3.0;
  EXPECT_NEAR(session_revenue(s, ledger, flat_tariffs(8), time), expected, 1e-12);
  EXPECT_NEAR(session_revenue(s, ledger, flat_tariffs(8), time), 5.094, 1e-3);
}

TEST(SessionRevenue, IdleOnlyNetsToZero) {
  const TimeGrid time{1.0, 8, 0.0};
  auto s = eight_hour_session();
  s.requested_charge_hours = 0.0;
  const auto ledger = make_ledger(s, std::vector<double>(8, 0.0), std::vector<double>(8, 0.0));
  EXPECT_NEAR(session_revenue(s, ledger, flat_tariffs(8), time), 0.0, 1e-12);
}

TEST(SessionRevenue, NegativeIdleIsAViolation) {
  const TimeGrid time{1.0, 8, 0.0};
  const auto s = eight_hour_session();
  SessionLedger bad;
  bad.used_charge_hours.assign(8, 1.0);
  bad.used_discharge_hours.assign(8, 0.5);
  bad.idle_hours = -4.0;
  EXPECT_THROW(session_revenue(s, bad, flat_tariffs(8), time), ContractViolation);
}

TEST(MakeLedger, PrefixRuleRejectsEarlyDischarge) {
  const auto s = eight_hour_session();
  std::vector<double> up{0, 1, 1, 0, 0, 0, 0, 0};
  std::vector<double> down{0.25, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_THROW(make_ledger(s, up, down), ContractViolation);
  // Equality at a prefix is admissible.
  std::vector<double> up2{0.25, 0, 1, 1, 0, 0, 0, 0};
  std::vector<double> down2{0, 0.25, 0, 0, 0, 0, 0, 0};
  EXPECT_NO_THROW(make_ledger(s, up2, down2));
}

TEST(MakeLedger, CapRuleRejectsExcessDischarge) {
  const auto s = eight_hour_session();
  std::vector<double> up{1, 1, 1, 0, 0, 0, 0, 0};
  std::vector<double> down{0, 0, 0, 0.75, 0, 0, 0, 0};
  EXPECT_THROW(make_ledger(s, up, down), ContractViolation);
}

TEST(MakeLedger, TotalsAndIdle) {
  const auto s = eight_hour_session();
  std::vector<double> up{0.5, 1, 0.75, 0, 0, 0, 0, 0};
  std::vector<double> down{0, 0, 0, 0.25, 0.25, 0, 0, 0};
  const auto l = make_ledger(s, up, down);
  EXPECT_DOUBLE_EQ(l.total_charge_hours, 2.25);
  EXPECT_DOUBLE_EQ(l.total_discharge_hours, 0.5);
  EXPECT_DOUBLE_EQ(l.idle_hours, 8.0 - 2.75);
}

TEST(LedgerFromPowers, ConvertsThroughUsedPeriod) {
  const auto s = eight_hour_session();
  std::vector<double> ch{10, 5, 0, 0};
  std::vector<double> dis{0, 0, 2.5, 0};
  const auto l = ledger_from_powers(s, ch, dis, 0.5);
  EXPECT_DOUBLE_EQ(l.total_charge_hours, 0.75);
  EXPECT_DOUBLE_EQ(l.total_discharge_hours, 0.125);
}

// Revenue is affine in the used periods: r(a + b) - r(0) = (r(a) - r(0)) + (r(b) - r(0)).
TEST(SessionRevenue, SuperpositionOnRandomLedgers) {
  const int steps = 12;
  const TimeGrid time{1.0, steps, 0.0};
  EVSession s = eight_hour_session();
  s.parking_hours = 1000.0;
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> price(-4.0, 4.0);

  for (int trial = 0; trial < 200; ++trial) {
    TariffBook tb = flat_tariffs(steps);
    tb.parking_eur_per_hour = price(gen);
    tb.flexibility_eur_per_hour = price(gen);
    for (int h = 0; h < steps; ++h) {
      tb.charge_eur_per_hour[h] = price(gen);
      tb.discharge_eur_per_hour[h] = price(gen);
    }
    auto random_ledger = [&] {
      SessionLedger l;
      for (int h = 0; h < steps; ++h) {
        l.used_charge_hours.push_back(u(gen));
        l.used_discharge_hours.push_back(u(gen));
        l.total_charge_hours += l.used_charge_hours.back();
        l.total_discharge_hours += l.used_discharge_hours.back();
      }
      l.idle_hours = s.parking_hours - l.total_charge_hours - l.total_discharge_hours;
      return l;
    };
    const auto a = random_ledger();
    const auto b = random_ledger();
    SessionLedger sum;
    SessionLedger zero;
    for (int h = 0; h < steps; ++h) {
      sum.used_charge_hours.push_back(a.used_charge_hours[h] + b.used_charge_hours[h]);
      sum.used_discharge_hours.push_back(a.used_discharge_hours[h] + b.used_discharge_hours[h]);
    }
    sum.total_charge_hours = a.total_charge_hours + b.total_charge_hours;
    sum.total_discharge_hours = a.total_discharge_hours + b.total_discharge_hours;
    sum.idle_hours = s.parking_hours - sum.total_charge_hours - sum.total_discharge_hours;
    zero.used_charge_hours.assign(steps, 0.0);
    zero.used_discharge_hours.assign(steps, 0.0);
    zero.idle_hours = s.parking_hours;

    const double r0 = session_revenue(s, zero, tb, time);
    const double ra = session_revenue(s, a, tb, time);
    const double rb = session_revenue(s, b, tb, time);
    const double rab = session_revenue(s, sum, tb, time);
    EXPECT_NEAR(rab - r0, (ra - r0) + (rb - r0), 1e-9);
  }
}
