#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "temgrid/domain.hpp"

namespace temgrid::io {

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed document. `line` is 0 when the problem is a field rather than
// syntax; `field` is a dotted path such as "buildings[1].battery".
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string field, int line = 0);
  [[nodiscard]] const std::string& field() const { return field_; }
  [[nodiscard]] int line() const { return line_; }

 private:
  std::string field_;
  int line_ = 0;
};

struct Moments {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Hours for the three durations, hour of day for the start time.
struct EVRequestStats {
  Moments parking{8.0, 1.0, 6.25, 11.0};
  Moments charging{2.0, 0.5, 1.25, 3.0};
  Moments discharging{0.75, 0.25, 0.0, 1.25};
  Moments start{9.5, 0.75, 8.0, 10.25};

  // Throws DomainError unless min <= mean <= max and std >= 0 for each.
  void check() const;
};

struct ChargerSpec {
  double max_charge_kw = 10.0;
  double max_discharge_kw = 10.0;
  double efficiency = 0.93;
};

inline constexpr double kDurationQuantum = 0.25;

std::vector<EVSession> sample_sessions(const EVRequestStats& stats, int count, std::uint64_t seed,
                                       const TimeGrid& time, const ChargerSpec& charger = {});

// Shuffles the pool with `seed` and deals `per_building` sessions to every
// building round-robin. Existing sessions are replaced.
std::vector<BuildingAssets> assign_sessions(const std::vector<EVSession>& sessions,
                                            std::vector<BuildingAssets> buildings, int per_building,
                                            std::uint64_t seed);

// `base_dir` resolves relative CSV references inside the document.
CommunityScenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
CommunityScenario load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const CommunityScenario& scenario);
std::string write_scenario(const CommunityScenario& scenario);
void write_scenario(const CommunityScenario& scenario, const std::filesystem::path& path);

nlohmann::json sessions_to_json(const std::vector<EVSession>& sessions);

// Signed net load per building from `hour,building,net_kw` rows. Hours are
// offsets from the start of the horizon and must land on step boundaries.
std::map<std::string, std::vector<double>> read_net_load_csv(std::istream& in, const TimeGrid& time);

// Four-building synthetic community with sampled EV sessions.
CommunityScenario bundled_scenario();

}  // namespace temgrid::io
