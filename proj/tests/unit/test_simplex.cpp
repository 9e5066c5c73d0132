#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include "temgrid/model_builder.hpp"
#include "temgrid/scenario_io.hpp"
#include "temgrid/simplex.hpp"
#include "temgrid/tariff_engine.hpp"

using namespace temgrid;
using namespace temgrid::lp;

namespace {

struct DenseLp {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<Relation> rel;
  Eigen::VectorXd c;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

LinearProgram to_program(const DenseLp& d) {
  LinearProgram p;
  for (int j = 0; j < d.c.size(); ++j) p.add_column("x" + std::to_string(j), d.c[j], d.lo[j], d.hi[j]);
  for (int i = 0; i < d.a.rows(); ++i) {
    Row r{"r" + std::to_string(i), {}, d.rel[i], d.b[i]};
    for (int j = 0; j < d.c.size(); ++j) {
      if (d.a(i, j) != 0.0) r.terms.push_back({j, d.a(i, j)});
    }
    p.add_row(r);
  }
  return p;
}

bool feasible(const DenseLp& d, const Eigen::VectorXd& x, double tol) {
  for (int j = 0; j < x.size(); ++j) {
    if (x[j] < d.lo[j] - tol || x[j] > d.hi[j] + tol) return false;
  }
  const Eigen::VectorXd ax = d.a * x;
  for (int i = 0; i < ax.size(); ++i) {
    if (d.rel[i] == Relation::kLessEqual && ax[i] > d.b[i] + tol) return false;
    if (d.rel[i] == Relation::kGreaterEqual && ax[i] < d.b[i] - tol) return false;
    if (d.rel[i] == Relation::kEqual && std::abs(ax[i] - d.b[i]) > tol) return false;
  }
  return true;
}

// Best objective over all basic solutions: every choice of n tight
// hyperplanes among rows and finite bounds. Empty when none is feasible.
std::optional<double> vertex_oracle(const DenseLp& d) {
  const int n = static_cast<int>(d.c.size());
  std::vector<Eigen::VectorXd> normals;
  std::vector<double> levels;
  for (int i = 0; i < d.a.rows(); ++i) {
    normals.push_back(d.a.row(i).transpose());
    levels.push_back(d.b[i]);
  }
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1.0;
    if (std::isfinite(d.lo[j])) {
      normals.push_back(e);
      levels.push_back(d.lo[j]);
    }
    if (std::isfinite(d.hi[j])) {
      normals.push_back(e);
      levels.push_back(d.hi[j]);
    }
  }
  const int k = static_cast<int>(normals.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  std::function<void(int, int)> choose = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd m(n, n);
      Eigen::VectorXd rhs(n);
      for (int r = 0; r < n; ++r) {
        m.row(r) = normals[pick[r]].transpose();
        rhs[r] = levels[pick[r]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd x = lu.solve(rhs);
      if (!feasible(d, x, 1e-9)) return;
      const double obj = d.c.dot(x);
      if (!best || obj < *best) best = obj;
      return;
    }
    for (int i = start; i < k; ++i) {
      pick[depth] = i;
      choose(i + 1, depth + 1);
    }
  };
  choose(0, 0);
  return best;
}

DenseLp random_dense(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> small(1, 4);
  std::uniform_int_distribution<int> rel(0, 5);
  const int n = small(gen);
  const int m = small(gen);
  DenseLp d;
  d.a = Eigen::MatrixXd(m, n);
  d.b = Eigen::VectorXd(m);
  d.c = Eigen::VectorXd(n);
  d.lo = Eigen::VectorXd::Zero(n);
  d.hi = Eigen::VectorXd(n);
  for (int j = 0; j < n; ++j) {
    d.c[j] = coef(gen);
    const int h = small(gen);
    d.hi[j] = h == 4 ? kInfinity : 2.0 * h;
    if (h == 1) d.lo[j] = -1.0;
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) d.a(i, j) = coef(gen);
    d.b[i] = coef(gen) * 2.0;
    const int r = rel(gen);
    d.rel.push_back(r < 3 ? Relation::kLessEqual : r < 5 ? Relation::kGreaterEqual : Relation::kEqual);
  }
  return d;
}

void check_ray(const DenseLp& d, const std::vector<double>& ray) {
  const Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(ray.data(), static_cast<long>(ray.size()));
  EXPECT_LT(d.c.dot(r), -1e-9);
  for (int j = 0; j < r.size(); ++j) {
    if (std::isfinite(d.hi[j])) {
      EXPECT_LE(r[j], 1e-9);
    }
    if (std::isfinite(d.lo[j])) {
      EXPECT_GE(r[j], -1e-9);
    }
  }
  const Eigen::VectorXd ar = d.a * r;
  for (int i = 0; i < ar.size(); ++i) {
    if (d.rel[i] == Relation::kLessEqual) {
      EXPECT_LE(ar[i], 1e-9);
    }
    if (d.rel[i] == Relation::kGreaterEqual) {
      EXPECT_GE(ar[i], -1e-9);
    }
    if (d.rel[i] == Relation::kEqual) {
      EXPECT_NEAR(ar[i], 0.0, 1e-9);
    }
  }
}

}  // namespace

TEST(SolveLp, SingleLowerBoundRow) {
  LinearProgram p;
  p.add_column("x", 1.0, 0.0, kInfinity);
  p.add_row({"lb", {{0, 1.0}}, Relation::kGreaterEqual, 3.0});
  const auto s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.values[0], 3.0, 1e-12);
  EXPECT_NEAR(s.objective_value, 3.0, 1e-12);
}

TEST(SolveLp, TwoVariableExample) {
  LinearProgram p;
  p.add_column("x", -1.0, 0.0, kInfinity);
  p.add_column("y", -1.0, 0.0, kInfinity);
  p.add_row({"sum", {{0, 1.0}, {1, 1.0}}, Relation::kLessEqual, 4.0});
  p.add_row({"xcap", {{0, 1.0}}, Relation::kLessEqual, 3.0});
  p.add_row({"ycap", {{1, 1.0}}, Relation::kLessEqual, 3.0});
  const auto s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, -4.0, 1e-12);
  EXPECT_NEAR(s.values[0] + s.values[1], 4.0, 1e-12);
}

TEST(SolveLp, ContradictoryBoundsAreInfeasible) {
  LinearProgram p;
  p.add_column("x", 0.0, -kInfinity, kInfinity);
  p.add_row({"up", {{0, 1.0}}, Relation::kLessEqual, 1.0});
  p.add_row({"down", {{0, 1.0}}, Relation::kGreaterEqual, 2.0});
  const auto s = solve_lp(p);
  EXPECT_EQ(s.status, LpStatus::kInfeasible);
  EXPECT_FALSE(s.infeasible_rows.empty());
}

TEST(SolveLp, UnboundedReturnsDescentRay) {
  LinearProgram p;
  p.add_column("x", -1.0, 0.0, kInfinity);
  p.add_column("y", 0.0, 0.0, kInfinity);
  p.add_row({"r", {{0, 1.0}, {1, -1.0}}, Relation::kLessEqual, 2.0});
  const auto s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::kUnbounded);
  ASSERT_EQ(s.unbounded_ray.size(), 2u);
  EXPECT_LT(-s.unbounded_ray[0], 0.0);
  EXPECT_LE(s.unbounded_ray[0] - s.unbounded_ray[1], 1e-12);
}

TEST(SolveLp, NoRowsUsesBounds) {
  LinearProgram p;
  p.add_column("a", 2.0, 1.0, 5.0);
  p.add_column("b", -3.0, 0.0, 4.0);
  p.objective_constant = 1.5;
  const auto s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 2.0 - 12.0 + 1.5, 1e-12);
}

TEST(SolveLp, RandomSmallProgramsMatchVertexEnumeration) {
  std::mt19937_64 gen(314);
  int optimal = 0;
  int infeasible = 0;
  int unbounded = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto d = random_dense(gen);
    const auto s = solve_lp(to_program(d));
    const auto oracle = vertex_oracle(d);
    switch (s.status) {
      case LpStatus::kOptimal: {
        ++optimal;
        ASSERT_TRUE(oracle.has_value()) << "trial " << trial;
        EXPECT_NEAR(s.objective_value, *oracle, 1e-7) << "trial " << trial;
        const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(s.values.data(), d.c.size());
        EXPECT_TRUE(feasible(d, x, 1e-7)) << "trial " << trial;
        break;
      }
      case LpStatus::kInfeasible:
        ++infeasible;
        EXPECT_FALSE(oracle.has_value()) << "trial " << trial;
        break;
      case LpStatus::kUnbounded:
        ++unbounded;
        EXPECT_TRUE(oracle.has_value()) << "trial " << trial;
        check_ray(d, s.unbounded_ray);
        break;
    }
  }
  EXPECT_GT(optimal, 100);
  EXPECT_GT(infeasible, 50);
  EXPECT_GT(unbounded, 20);
}

TEST(SolveLp, WeakDualityOnRandomPrograms) {
  std::mt19937_64 gen(2718);
  for (int trial = 0; trial < 500; ++trial) {
    const auto d = random_dense(gen);
    const auto p = to_program(d);
    const auto s = solve_lp(p);
    if (s.status != LpStatus::kOptimal) continue;
    const double bound = dual_bound(p, s.dual_values);
    EXPECT_LE(bound, s.objective_value + 1e-7) << "trial " << trial;
    EXPECT_NEAR(bound, s.objective_value, 1e-7) << "trial " << trial;
  }
}

TEST(SolveLp, WeakDualityOnFixtureRelaxation) {
  const auto sc = io::bundled_scenario();
  const auto m = model::build(sc, tariff::price_community(sc), RunMode::kCommunity);
  const auto s = solve_lp(m.lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  const double bound = dual_bound(m.lp, s.dual_values, 1e-7);
  EXPECT_LE(bound, s.objective_value + 1e-7);
  EXPECT_NEAR(bound, s.objective_value, 1e-6);
  // Primal feasibility of the returned point.
  for (const auto& r : m.lp.rows) {
    const double act = m.lp.activity(r, s.values);
    if (r.relation != Relation::kGreaterEqual) {
      EXPECT_LE(act - r.rhs, 1e-7) << r.name;
    }
    if (r.relation != Relation::kLessEqual) {
      EXPECT_GE(act - r.rhs, -1e-7) << r.name;
    }
  }
}

TEST(SolveLp, BackendsAgreeExactly) {
  const auto sc = io::bundled_scenario();
  const auto m = model::build(sc, tariff::price_community(sc), RunMode::kIndividual);
  SimplexOptions serial;
  serial.backend = kernels::Backend::kSerial;
  SimplexOptions parallel;
  parallel.backend = kernels::Backend::kOpenMP;
  const auto a = solve_lp(m.lp, serial);
  const auto b = solve_lp(m.lp, parallel);
  EXPECT_EQ(a.objective_value, b.objective_value);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SolveLp, WarmStartAfterBoundChangeMatchesColdStart) {
  const auto sc = io::bundled_scenario();
  auto m = model::build(sc, tariff::price_community(sc), RunMode::kCommunity);
  const auto root = solve_lp(m.lp);
  ASSERT_EQ(root.status, LpStatus::kOptimal);
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 10; ++trial) {
    auto child = m.lp;
    // Pin a few positive variables to zero, as branching does.
    for (int k = 0; k < 3; ++k) {
      int j = static_cast<int>(gen() % child.num_columns());
      for (int probe = 0; probe < child.num_columns() && root.values[j] <= 1e-6; ++probe) {
        j = (j + 1) % child.num_columns();
      }
      child.columns[j].upper = std::max(child.columns[j].lower, 0.0);
    }
    SimplexOptions warm;
    warm.warm_start = &root.basis;
    const auto a = solve_lp(child, warm);
    const auto b = solve_lp(child);
    ASSERT_EQ(a.status, b.status) << "trial " << trial;
    if (a.status == LpStatus::kOptimal) {
      EXPECT_NEAR(a.objective_value, b.objective_value, 1e-6);
    }
  }
}

TEST(SolveLp, DeadlineRaisesLimitReached) {
  const auto sc = io::bundled_scenario();
  const auto m = model::build(sc, tariff::price_community(sc), RunMode::kCommunity);
  SimplexOptions opt;
  opt.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  EXPECT_THROW(solve_lp(m.lp, opt), LimitReached);
}
