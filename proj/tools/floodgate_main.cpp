// floodgate: simulate a single-server node under normal and UDP-flood traffic,
// extract windowed features and raise a saturation alarm.

#include "floodgate/commands.hpp"
#include "floodgate/errors.hpp"
#include "floodgate/io.hpp"
#include "floodgate/traffic.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace floodgate;

namespace {

void
init_logging()
{
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("FLOODGATE_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

struct Overrides
{
  std::optional<std::uint64_t> seed;
  std::optional<double> window;
  bool no_attack = false;

  ScenarioConfig
  apply(ScenarioConfig cfg) const
  {
    if (seed) {
      cfg.seed = *seed;
    }
    if (window) {
      cfg.window_s = *window;
    }
    if (no_attack) {
      cfg = without_attack(std::move(cfg));
    }
    validate(cfg);
    return cfg;
  }
};

ScenarioConfig
load_or_default(const std::string& path)
{
  if (path.empty()) {
    spdlog::info("no scenario file given, using the built-in default");
    return build_default_scenario();
  }
  return load_scenario(path);
}

void
add_overrides(CLI::App* cmd, Overrides& o)
{
  cmd->add_option("--seed", o.seed, "Override the scenario seed");
  cmd->add_option("--window", o.window, "Override the metrics window width (s)");
  cmd->add_flag("--no-attack", o.no_attack, "Drop every flood from the scenario");
}

} // namespace

int
main(int argc, char** argv)
{
  init_logging();
  CLI::App app{"floodgate: queueing-based UDP flood detection on a simulated server"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out;
  Overrides overrides;

  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write metrics, alarms, losses and a report");
  RunOptions run_opts;
  run_cmd->add_option("scenario", scenario_path, "Scenario JSON (default: built-in scenario)");
  run_cmd->add_option("--out", out, "Output directory")->required();
  run_cmd->add_flag("--trace", run_opts.write_trace, "Also write the full event trace");
  run_cmd->add_flag("--plot", run_opts.plot, "Also render SVG charts");
  add_overrides(run_cmd, overrides);

  auto* cal_cmd = app.add_subcommand("calibrate", "Bisect the flood rate to hit a target CBR loss");
  CalibrationOptions cal_opts;
  cal_cmd->add_option("scenario", scenario_path, "Scenario JSON (default: built-in scenario)");
  cal_cmd->add_option("--target", cal_opts.target_percent, "Target CBR loss during floods, percent")
    ->capture_default_str();
  cal_cmd->add_option("--tolerance", cal_opts.tolerance_pp, "Stop within this many points")->capture_default_str();
  cal_cmd->add_option("--rate-low", cal_opts.rate_low, "Lower flood rate bound (pps)");
  cal_cmd->add_option("--rate-high", cal_opts.rate_high, "Upper flood rate bound (pps)");
  cal_cmd->add_option("--seeds", cal_opts.seeds, "Seeds pooled per evaluation")->capture_default_str();
  cal_cmd->add_option("--out", out, "Write the calibrated scenario here (default: stdout)");
  add_overrides(cal_cmd, overrides);

  auto* val_cmd = app.add_subcommand("validate", "Check the simulator against queueing closed forms");
  ValidateOptions val_opts;
  val_cmd->add_option("--lambda", val_opts.lambda, "Arrival rate for the M/M/1 checks")->capture_default_str();
  val_cmd->add_option("--mu", val_opts.mu, "Service rate for the M/M/1 checks")->capture_default_str();
  val_cmd->add_option("--horizon", val_opts.horizon_s, "M/M/1 horizon (s)")->capture_default_str();
  val_cmd->add_option("--seed", val_opts.seed, "Seed")->capture_default_str();
  val_cmd->add_flag("--inject-off-by-one", val_opts.inject_off_by_one, "Mutation check: buffer admits K+1");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario across seeds and aggregate detection quality");
  SweepOptions sweep_opts;
  sweep_cmd->add_option("scenario", scenario_path, "Scenario JSON (default: built-in scenario)");
  sweep_cmd->add_option("--seeds", sweep_opts.seeds, "Number of seeds")->capture_default_str();
  sweep_cmd->add_option("--threads", sweep_opts.threads, "Worker threads (0: all cores)");
  sweep_cmd->add_option("--out", out, "Write the report JSON here (default: stdout)");
  add_overrides(sweep_cmd, overrides);

  auto* emit_cmd = app.add_subcommand("emit-default-scenario", "Print the built-in scenario as JSON");
  emit_cmd->add_option("--out", out, "Write to this file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      auto cfg = overrides.apply(load_or_default(scenario_path));
      run_opts.out_dir = out;
      auto result = cmd_run(cfg, run_opts);
      spdlog::info("{} windows, {} alarm windows, accuracy {}", result.windows.size(),
                   result.classification.alarm_windows, result.classification.accuracy);
      std::cout << "wrote " << out << "/{metrics.csv,alarms.csv,loss.csv,report.json}\n";
      return kExitOk;
    }
    if (*cal_cmd) {
      auto cfg = overrides.apply(load_or_default(scenario_path));
      auto result = cmd_calibrate(cfg, cal_opts);
      spdlog::info("flood rate {} pps gives CBR loss {}% after {} steps", result.flood_rate_pps,
                   result.cbr_loss_percent, result.iterations);
      if (out.empty()) {
        std::cout << scenario_to_json(result.scenario).dump(2) << '\n';
      }
      else {
        save_scenario(result.scenario, out);
        std::cout << "flood rate " << format_double(result.flood_rate_pps) << " pps, CBR loss "
                  << format_double(result.cbr_loss_percent) << "%\n";
      }
      return kExitOk;
    }
    if (*val_cmd) {
      bool all = true;
      for (const auto& c : cmd_validate(val_opts)) {
        all = all && c.passed;
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  observed=" << format_double(c.observed)
                  << " tolerance=" << format_double(c.tolerance) << "  " << c.detail << '\n';
      }
      return all ? kExitOk : kExitValidationFailure;
    }
    if (*sweep_cmd) {
      auto cfg = overrides.apply(load_or_default(scenario_path));
      auto doc = to_json(cmd_sweep(cfg, sweep_opts)).dump(2);
      if (out.empty()) {
        std::cout << doc << '\n';
      }
      else {
        std::ofstream(out) << doc << '\n';
      }
      return kExitOk;
    }
    if (*emit_cmd) {
      auto cfg = build_default_scenario();
      if (out.empty()) {
        std::cout << scenario_to_json(cfg).dump(2) << '\n';
      }
      else {
        save_scenario(cfg, out);
      }
      return kExitOk;
    }
  }
  catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  catch (const UnstableSystem& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  catch (const CalibrationError& e) {
    std::cerr << "calibration failed: " << e.what() << '\n';
    return kExitCalibrationFailure;
  }
  catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
