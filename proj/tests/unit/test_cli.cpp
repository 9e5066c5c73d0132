#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "temgrid/cli.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kFixture = std::string(TEMGRID_FIXTURE_DIR) + "/community.json";
const std::string kBad = std::string(TEMGRID_FIXTURE_DIR) + "/bad.json";

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "temgrid");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = temgrid::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("temgrid_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RunWritesEveryArtifact) {
  const auto o = invoke({"run", kFixture, "--modes", "baseline,individual,community", "-o", (dir_ / "out").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* f : {"dispatch_baseline.csv", "dispatch_individual.csv", "dispatch_community.csv", "prices.csv",
                        "costs.txt", "costs.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  }
  EXPECT_NE(o.out.find("community"), std::string::npos);
  const auto costs = nlohmann::json::parse(slurp(dir_ / "out" / "costs.json"));
  EXPECT_EQ(costs["buildings"].size(), 4u);
}

TEST_F(CliTest, RunIsByteIdenticalAcrossInvocations) {
  ASSERT_EQ(invoke({"run", kFixture, "-o", (dir_ / "a").string()}).code, 0);
  ASSERT_EQ(invoke({"run", kFixture, "-o", (dir_ / "b").string()}).code, 0);
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    const auto name = entry.path().filename();
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / name)) << name;
  }
}

TEST_F(CliTest, SubsetOfModes) {
  const auto o = invoke({"run", kFixture, "--modes", "baseline", "-o", (dir_ / "out").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "dispatch_baseline.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "dispatch_community.csv"));
}

TEST_F(CliTest, MissingFileExitsThree) {
  EXPECT_EQ(invoke({"run", (dir_ / "nope.json").string(), "-o", (dir_ / "out").string()}).code, 3);
  EXPECT_EQ(invoke({"validate", (dir_ / "nope.json").string()}).code, 3);
}

TEST_F(CliTest, TruncatedFileExitsThree) {
  const auto text = slurp(kFixture);
  {
    std::ofstream out(dir_ / "cut.json");
    out << text.substr(0, text.size() / 3);
  }
  const auto o = invoke({"validate", (dir_ / "cut.json").string()});
  EXPECT_EQ(o.code, 3);
  EXPECT_NE(o.err.find("line"), std::string::npos) << o.err;
}

TEST_F(CliTest, ValidateBadFixtureExitsOneAndListsViolations) {
  const auto o = invoke({"validate", kBad});
  EXPECT_EQ(o.code, 1);
  const auto all = o.out + o.err;
  EXPECT_NE(all.find("grid-import-negative@1"), std::string::npos) << all;
  EXPECT_NE(all.find("ev-periods-exceed-parking"), std::string::npos) << all;
  EXPECT_EQ(invoke({"run", kBad, "-o", (dir_ / "out").string()}).code, 1);
}

TEST_F(CliTest, ValidateGoodFixtureExitsZero) { EXPECT_EQ(invoke({"validate", kFixture}).code, 0); }

TEST_F(CliTest, UsageErrorsExitThree) {
  EXPECT_EQ(invoke({"frobnicate"}).code, 3);
  EXPECT_EQ(invoke({"run", kFixture, "--modes", "everything"}).code, 3);
  EXPECT_EQ(invoke({"run", kFixture, "--compensation", "half"}).code, 3);
}

TEST_F(CliTest, TimeLimitExitsTwo) {
  const auto o = invoke({"run", kFixture, "--modes", "community", "--time-limit", "1e-9", "-o", (dir_ / "out").string()});
  EXPECT_EQ(o.code, 2) << o.err;
}

TEST_F(CliTest, PriceSampleAndDump) {
  auto o = invoke({"price", kFixture});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(std::count(o.out.begin(), o.out.end(), '\n'), 25);
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "step,ratio,c_ec_eur_mwh,c_ic_eur_mwh");

  o = invoke({"sample-evs", "--count", "5", "--seed", "42"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j.size(), 5u);
  EXPECT_EQ(invoke({"sample-evs", "--count", "5", "--seed", "42"}).out, o.out);

  o = invoke({"dump-lp", kFixture, "--mode", "community", "-o", (dir_ / "m.lp").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto lp = slurp(dir_ / "m.lp");
  EXPECT_NE(lp.find("Minimize"), std::string::npos);
  EXPECT_NE(lp.find("SOS"), std::string::npos);

  o = invoke({"example", "-o", (dir_ / "ex.json").string()});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(slurp(dir_ / "ex.json"), slurp(kFixture));
}

TEST_F(CliTest, SeedOverrideChangesSampledSessions) {
  // A document whose sessions come from sampling reacts to --seed.
  auto doc = nlohmann::json::parse(slurp(kFixture));
  for (auto& b : doc["buildings"]) b.erase("ev_sessions");
  doc["ev_pool"] = {{"count", 30}, {"seed", 42}, {"per_building", 6}, {"assign_seed", 7}};
  {
    std::ofstream out(dir_ / "pool.json");
    out << doc.dump(2);
  }
  temgrid::cli::RunConfig config;
  config.scenario_path = dir_ / "pool.json";
  const auto base = temgrid::cli::load_configured(config);
  config.seed = 43;
  const auto other = temgrid::cli::load_configured(config);
  bool differs = false;
  for (std::size_t b = 0; b < base.buildings.size(); ++b) {
    for (std::size_t n = 0; n < base.buildings[b].sessions.size(); ++n) {
      differs = differs || base.buildings[b].sessions[n].parking_hours != other.buildings[b].sessions[n].parking_hours;
    }
  }
  EXPECT_TRUE(differs);
}
