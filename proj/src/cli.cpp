#include "temgrid/cli.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "temgrid/lp_writer.hpp"
#include "temgrid/model_builder.hpp"
#include "temgrid/pipeline.hpp"
#include "temgrid/reporting.hpp"
#include "temgrid/scenario_io.hpp"
#include "temgrid/solver.hpp"
#include "temgrid/tariff_engine.hpp"

namespace temgrid::cli {

namespace {

constexpr double kVerifyTol = 1e-6;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::IoError(fmt::format("cannot open scenario file {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::IoError(fmt::format("cannot write {}", path.string()));
  body(out);
  out.flush();
  if (!out) throw io::IoError(fmt::format("write to {} failed", path.string()));
}

// Sends output to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
  } else {
    write_file(path, body);
  }
}

void override_seeds(nlohmann::json& doc, std::uint64_t seed) {
  if (!doc.is_object()) return;
  if (auto pool = doc.find("ev_pool"); pool != doc.end() && pool->is_object()) (*pool)["seed"] = seed;
  if (auto b = doc.find("buildings"); b != doc.end() && b->is_array()) {
    for (auto& building : *b) {
      if (!building.is_object()) continue;
      if (auto s = building.find("ev_sampling"); s != building.end() && s->is_object()) (*s)["seed"] = seed;
    }
  }
}

// Maps library errors onto exit codes and prints them.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    err << "scenario is invalid:\n";
    for (const auto& v : e.violations()) err << "  " << v.code << "  " << v.path << "  " << v.message << '\n';
    return kExitValidation;
  } catch (const solver::InfeasibleModel& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& row : e.rows()) err << "  " << row << '\n';
    return kExitValidation;
  } catch (const solver::SolverLimitError& e) {
    err << "solver limit: " << e.what() << '\n';
    return kExitSolverLimit;
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitIo;
  } catch (const io::IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}

std::vector<RunMode> parse_modes(const std::vector<std::string>& names) {
  std::vector<RunMode> modes;
  for (const auto& n : names) {
    const RunMode m = parse_run_mode(n);
    if (std::find(modes.begin(), modes.end(), m) == modes.end()) modes.push_back(m);
  }
  return modes;
}

void add_override_flags(CLI::App* cmd, RunConfig& config, std::string& compensation, std::string& terminal) {
  cmd->add_option("--seed", config.seed, "Replace every EV sampling seed in the scenario");
  cmd->add_option("--comp-tol", config.comp_tol, "Complementarity tolerance in kW")->check(CLI::PositiveNumber);
  cmd->add_option("--feas-tol", config.feas_tol, "Primal feasibility tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--time-limit", config.time_limit_seconds, "Solver time limit per mode in seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--compensation", compensation, "Discharge compensation rule")
      ->check(CLI::IsMember({"one-way", "round-trip"}));
  cmd->add_option("--terminal-soc", terminal, "Battery end-of-day condition")->check(CLI::IsMember({"free", "restore"}));
  cmd->add_flag("--eq2-verbatim", config.eq2_verbatim, "Price residual net load directly instead of grid flows");
}

void finish_overrides(RunConfig& config, const std::string& compensation, const std::string& terminal) {
  if (!compensation.empty()) config.compensation = parse_compensation_mode(compensation);
  if (!terminal.empty()) config.terminal_soc = parse_terminal_soc(terminal);
}

}  // namespace

CommunityScenario load_configured(const RunConfig& config) {
  std::string text = read_text(config.scenario_path);
  if (config.seed) {
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (!doc.is_discarded()) {
      override_seeds(doc, *config.seed);
      text = doc.dump();
    }
  }
  auto sc = io::parse_scenario(text, config.scenario_path.parent_path());
  auto& opt = sc.options;
  if (config.comp_tol) opt.solver.comp_tol = *config.comp_tol;
  if (config.feas_tol) opt.solver.feas_tol = *config.feas_tol;
  if (config.time_limit_seconds) opt.solver.time_limit_seconds = *config.time_limit_seconds;
  if (config.compensation) opt.compensation = *config.compensation;
  if (config.terminal_soc) opt.terminal_soc = *config.terminal_soc;
  if (config.eq2_verbatim) opt.eq2_verbatim = true;
  auto violations = validate_scenario(sc);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return sc;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.modes.empty()) throw DomainError("no run modes requested");
    const auto scenario = load_configured(config);
    const auto result = run_pipeline(scenario, config.modes);

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw io::IoError(fmt::format("cannot create {}: {}", config.output_dir.string(), ec.message()));

    bool limited = false;
    bool dirty = false;
    for (const auto& run : result.runs) {
      const auto name = to_string(run.mode);
      write_file(config.output_dir / fmt::format("dispatch_{}.csv", name),
                 [&](std::ostream& os) { report::export_dispatch_csv(os, scenario, run.solution); });
      const auto flagged = run.verification.flagged(kVerifyTol, scenario.options.solver.comp_tol);
      out << fmt::format("{:<10} {:<8} objective {:>12} EUR  nodes {:>4}  branched {:>3}  {:.2f} s{}\n", name,
                         solver::to_string(run.solution.status), report::fixed(run.solution.objective, 4),
                         run.solution.nodes, run.solution.branched_nodes, run.seconds,
                         flagged.empty() ? "" : "  VERIFY FAILED");
      for (const auto& f : flagged) err << fmt::format("{}: residual check failed for {}\n", name, f);
      limited = limited || run.solution.status == solver::SolveStatus::kLimit;
      dirty = dirty || !flagged.empty();
    }
    write_file(config.output_dir / "prices.csv", [&](std::ostream& os) { report::export_prices_csv(os, result.prices); });
    write_file(config.output_dir / "costs.txt", [&](std::ostream& os) { report::write_cost_table(os, result.costs); });
    write_file(config.output_dir / "costs.json",
               [&](std::ostream& os) { os << report::cost_json(result.costs).dump(2) << '\n'; });
    out << '\n';
    report::write_cost_table(out, result.costs);
    if (dirty) return static_cast<int>(kExitInternal);
    if (limited) {
      err << "solver stopped at a node or time limit; reported dispatch is the best found\n";
      return static_cast<int>(kExitSolverLimit);
    }
    return static_cast<int>(kExitOk);
  });
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Day-ahead scheduling for a community of buildings with PV, batteries and EV chargers"};
  app.name("temgrid");
  app.require_subcommand(1);

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file and list every violation");
  validate->add_option("scenario", validate_path, "Scenario JSON")->required();

  // price
  std::string price_path;
  std::string price_out;
  auto* price = app.add_subcommand("price", "Print per-step community tariffs as CSV");
  price->add_option("scenario", price_path, "Scenario JSON")->required();
  price->add_option("-o,--out", price_out, "Write to this file instead of stdout");

  // run
  RunConfig config;
  std::vector<std::string> mode_names{"baseline", "individual", "community"};
  std::string compensation;
  std::string terminal;
  std::string output_dir = "out";
  auto* run_cmd = app.add_subcommand("run", "Solve the requested modes and write reports");
  run_cmd->add_option("scenario", config.scenario_path, "Scenario JSON")->required();
  run_cmd->add_option("--modes", mode_names, "Comma-separated subset of baseline,individual,community")
      ->delimiter(',')
      ->check(CLI::IsMember({"baseline", "individual", "community"}));
  run_cmd->add_option("-o,--out", output_dir, "Output directory");
  add_override_flags(run_cmd, config, compensation, terminal);

  // sample-evs
  int sample_count = 30;
  std::uint64_t sample_seed = 42;
  std::string stats_path;
  std::string sample_out;
  TimeGrid sample_time;
  auto* sample = app.add_subcommand("sample-evs", "Draw EV sessions from parking statistics and print them as JSON");
  sample->add_option("--count", sample_count, "Number of sessions")->check(CLI::NonNegativeNumber);
  sample->add_option("--seed", sample_seed, "Generator seed");
  sample->add_option("--stats", stats_path, "JSON file with parking/charging/discharging/start moments");
  sample->add_option("--step-hours", sample_time.step_hours, "Step length in hours")->check(CLI::PositiveNumber);
  sample->add_option("--steps", sample_time.steps, "Number of steps")->check(CLI::PositiveNumber);
  sample->add_option("--start-hour", sample_time.start_hour_of_day, "Hour of day at step 0");
  sample->add_option("-o,--out", sample_out, "Write to this file instead of stdout");

  // dump-lp
  RunConfig dump_config;
  std::string dump_mode = "community";
  std::string dump_out;
  std::string dump_comp;
  std::string dump_terminal;
  bool no_sos = false;
  auto* dump = app.add_subcommand("dump-lp", "Write the model of one mode in LP file format");
  dump->add_option("scenario", dump_config.scenario_path, "Scenario JSON")->required();
  dump->add_option("--mode", dump_mode, "Run mode")->check(CLI::IsMember({"baseline", "individual", "community"}));
  dump->add_option("-o,--out", dump_out, "Write to this file instead of stdout");
  dump->add_flag("--no-sos", no_sos, "Omit the SOS1 section for complementarity pairs");
  add_override_flags(dump, dump_config, dump_comp, dump_terminal);

  // example
  std::string example_out;
  auto* example = app.add_subcommand("example", "Write the bundled four-building scenario as JSON");
  example->add_option("-o,--out", example_out, "Write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitIo;
  }

  if (*validate) {
    return guarded(err, [&] {
      RunConfig c;
      c.scenario_path = validate_path;
      const auto sc = load_configured(c);
      std::size_t sessions = 0;
      for (const auto& b : sc.buildings) sessions += b.sessions.size();
      out << fmt::format("valid: {} buildings, {} steps of {} h, {} EV sessions\n", sc.buildings.size(),
                         sc.time.steps, sc.time.step_hours, sessions);
      return static_cast<int>(kExitOk);
    });
  }
  if (*price) {
    return guarded(err, [&] {
      RunConfig c;
      c.scenario_path = price_path;
      const auto sc = load_configured(c);
      const auto prices = tariff::price_community(sc);
      emit(price_out, out, [&](std::ostream& os) { report::export_prices_csv(os, prices); });
      return static_cast<int>(kExitOk);
    });
  }
  if (*run_cmd) {
    int code = guarded(err, [&] {
      finish_overrides(config, compensation, terminal);
      config.modes = parse_modes(mode_names);
      config.output_dir = output_dir;
      return static_cast<int>(kExitOk);
    });
    if (code != kExitOk) return code;
    return run(config, out, err);
  }
  if (*sample) {
    return guarded(err, [&] {
      io::EVRequestStats stats;
      if (!stats_path.empty()) {
        // Reuse the scenario parser's moment reader through a tiny document.
        const auto text = read_text(stats_path);
        auto doc = nlohmann::json::parse(text, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) throw io::ParseError("stats file is not a JSON object", stats_path);
        auto read = [&](const char* key, io::Moments& m) {
          if (!doc.contains(key)) return;
          const auto& j = doc[key];
          for (const char* f : {"mean", "std", "min", "max"}) {
            if (!j.contains(f) || !j[f].is_number()) {
              throw io::ParseError("expected a number", fmt::format("{}.{}", key, f));
            }
          }
          m = {j["mean"].get<double>(), j["std"].get<double>(), j["min"].get<double>(), j["max"].get<double>()};
        };
        read("parking", stats.parking);
        read("charging", stats.charging);
        read("discharging", stats.discharging);
        read("start", stats.start);
      }
      const auto sessions = io::sample_sessions(stats, sample_count, sample_seed, sample_time);
      emit(sample_out, out, [&](std::ostream& os) { os << io::sessions_to_json(sessions).dump(2) << '\n'; });
      return static_cast<int>(kExitOk);
    });
  }
  if (*dump) {
    return guarded(err, [&] {
      finish_overrides(dump_config, dump_comp, dump_terminal);
      const auto sc = load_configured(dump_config);
      const auto prices = tariff::price_community(sc);
      const auto model = model::build(sc, prices, parse_run_mode(dump_mode));
      emit(dump_out, out, [&](std::ostream& os) { model::write_lp(os, model, !no_sos); });
      return static_cast<int>(kExitOk);
    });
  }
  if (*example) {
    return guarded(err, [&] {
      const auto sc = io::bundled_scenario();
      emit(example_out, out, [&](std::ostream& os) { os << io::write_scenario(sc); });
      return static_cast<int>(kExitOk);
    });
  }
  return kExitInternal;
}

}  // namespace temgrid::cli
