#pragma once

#include <string>
#include <vector>

#include "temgrid/domain.hpp"
#include "temgrid/linear_program.hpp"
#include "temgrid/tariff_engine.hpp"

namespace temgrid::model {

enum class VarKind {
  kGridImport,
  kGridExport,
  kBsCharge,
  kBsDischarge,
  kSoc,
  kCommExport,
  kCommImport,
  // Relief on the community caps; see add_community_constraints.
  kCommExportRelief,
  kCommImportRelief,
  kEvCharge,
  kEvDischarge,
};

const char* to_string(VarKind kind);

struct VarInfo {
  VarKind kind;
  int building = 0;
  int session = -1;  // EV variables only
  int step = 0;
};

// Stable index layout. For every building the per-step block comes first
// (kinds kGridImport..kCommImportRelief, step-major), then every session's
// (charge, discharge) pairs, step-major.
class VariableCatalog {
 public:
  VariableCatalog() = default;
  VariableCatalog(const CommunityScenario& scenario);

  [[nodiscard]] int index(VarKind kind, int building, int step) const;
  [[nodiscard]] int ev_index(VarKind kind, int building, int session, int step) const;
  [[nodiscard]] const VarInfo& info(int var) const { return vars_.at(var); }
  [[nodiscard]] int size() const { return static_cast<int>(vars_.size()); }
  [[nodiscard]] int steps() const { return steps_; }
  [[nodiscard]] int buildings() const { return static_cast<int>(building_offset_.size()); }
  [[nodiscard]] int sessions(int building) const { return session_count_.at(building); }
  [[nodiscard]] std::string name(int var) const;

 private:
  static constexpr int kPerStepKinds = 9;
  int steps_ = 0;
  std::vector<int> building_offset_;
  std::vector<int> session_count_;
  std::vector<VarInfo> vars_;
};

struct ComplementarityPair {
  int first = 0;
  int second = 0;
};

struct MilpModel {
  lp::LinearProgram lp;
  std::vector<ComplementarityPair> complementarity_pairs;
  VariableCatalog catalog;
  RunMode mode = RunMode::kCommunity;
  // Objective constant attributable to each building (parking revenue).
  std::vector<double> building_constant;
};

// Incremental assembly. The constructor lays out every column with its
// mode-dependent bounds; each add_* call appends rows, objective terms and
// complementarity pairs for one part of the formulation.
class ModelBuilder {
 public:
  ModelBuilder(const CommunityScenario& scenario, const tariff::CommunityPrices& prices, RunMode mode);

  // Grid/community pricing of the building's net flow, plus (unless the
  // verbatim electricity cost is selected) one balance row per step:
  //   import - export = L+ - L- + bs_ch - bs_dis + sum(ev_ch - ev_dis) + c_exp - c_imp
  void add_power_balance(int building);
  void add_ev_constraints(int building, int session);
  void add_storage_constraints(int building);
  void add_community_constraints();

  MilpModel take() &&;

 private:
  void add_row(lp::Row row);
  double period_coef(double max_kw) const;

  const CommunityScenario& scenario_;
  const tariff::CommunityPrices& prices_;
  MilpModel model_;
};

// Assembles the cost-minimization program for one run mode. Prices are only
// read in community mode.
MilpModel build(const CommunityScenario& scenario, const tariff::CommunityPrices& prices, RunMode mode);

// Count of variables whose bounds leave room to move (upper > lower).
int count_free_variables(const MilpModel& model);

// Sum over buildings and steps of step * (L+ C_IG + L- C_EG).
double baseline_cost(const CommunityScenario& scenario);

}  // namespace temgrid::model
