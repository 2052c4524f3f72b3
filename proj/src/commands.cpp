#include "floodgate/commands.hpp"

#include "floodgate/engine.hpp"
#include "floodgate/errors.hpp"
#include "floodgate/io.hpp"
#include "floodgate/plot.hpp"
#include "floodgate/properties.hpp"
#include "floodgate/traffic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

namespace floodgate {

using nlohmann::json;

GroundTruth
ground_truth(const ScenarioConfig& scenario)
{
  GroundTruth truth;
  truth.horizon_s = scenario.horizon_s;
  for (const auto& f : scenario.attack.floods) {
    truth.attacks.push_back(Interval{f.start_s, f.end_s});
  }
  return truth;
}

RunResult
execute(const ScenarioConfig& scenario, std::ostream* trace_csv)
{
  validate(scenario);
  const TimeNs horizon = seconds_to_ns(scenario.horizon_s);
  MetricsAccumulator metrics(std::max<TimeNs>(1, seconds_to_ns(scenario.window_s)), horizon);
  LittleAccumulator little;
  LossAccumulator loss(scenario);
  std::optional<TraceCsvWriter> trace_writer;
  if (trace_csv) {
    trace_writer.emplace(*trace_csv);
  }

  run(scenario, [&](const PacketEvent& ev) {
    metrics.ingest(ev);
    little.ingest(ev);
    loss.ingest(ev);
    if (trace_writer) {
      (*trace_writer)(ev);
    }
  });

  RunResult r;
  r.windows = metrics.finish();
  r.signals = signal_series(r.windows, scenario.detector, scenario.buffer_K);
  r.classification = classification_report(r.signals, ground_truth(scenario), scenario.window_s);
  r.little = little.finish(horizon);
  r.loss = loss.finish();
  return r;
}

json
report_json(const ScenarioConfig& scenario, const RunResult& result)
{
  return json{{"scenario",
               {{"seed", scenario.seed},
                {"horizon_s", scenario.horizon_s},
                {"window_s", scenario.window_s},
                {"floods", scenario.attack.floods.size()}}},
              {"classification", to_json(result.classification)},
              {"little", to_json(result.little)},
              {"loss", to_json(result.loss)}};
}

RunResult
cmd_run(const ScenarioConfig& scenario, const RunOptions& options)
{
  namespace fs = std::filesystem;
  fs::create_directories(options.out_dir);
  auto open = [&](const char* name) {
    std::ofstream out(options.out_dir / name);
    if (!out) {
      throw Error((options.out_dir / name).string() + ": cannot open for writing");
    }
    return out;
  };

  RunResult result;
  if (options.write_trace) {
    auto trace = open("trace.csv");
    result = execute(scenario, &trace);
  }
  else {
    result = execute(scenario);
  }

  {
    auto out = open("metrics.csv");
    write_metrics_csv(out, result.windows);
  }
  {
    auto out = open("alarms.csv");
    write_alarms_csv(out, result.signals);
  }
  {
    auto out = open("loss.csv");
    write_loss_csv(out, result.loss);
  }
  {
    auto out = open("report.json");
    out << report_json(scenario, result).dump(2) << '\n';
  }
  if (options.plot) {
    write_plots(options.out_dir, result.windows, result.signals);
  }
  return result;
}

ScenarioConfig
with_flood_rate(ScenarioConfig scenario, double rate_pps)
{
  for (auto& f : scenario.attack.floods) {
    f.rate_pps = rate_pps;
  }
  return scenario;
}

double
cbr_flood_loss(const ScenarioConfig& scenario, unsigned seeds)
{
  std::uint64_t arrivals = 0, drops = 0;
  for (unsigned i = 0; i < seeds; ++i) {
    ScenarioConfig s = scenario;
    s.seed = scenario.seed + i;
    LossAccumulator loss(s);
    run(s, [&](const PacketEvent& ev) { loss.ingest(ev); });
    for (const auto& row : loss.finish().rows) {
      if (row.traffic_class == TrafficClass::Cbr) {
        arrivals += row.arrivals;
        drops += row.drops;
      }
    }
  }
  return arrivals == 0 ? 0.0 : 100.0 * static_cast<double>(drops) / static_cast<double>(arrivals);
}

CalibrationResult
cmd_calibrate(const ScenarioConfig& scenario, const CalibrationOptions& options)
{
  if (!(options.target_percent > 0.0 && options.target_percent < 100.0)) {
    throw ConfigError("target: must be in (0, 100)");
  }
  if (scenario.attack.floods.empty()) {
    throw ConfigError("attack.floods: calibration needs at least one flood");
  }
  if (options.seeds == 0) {
    throw ConfigError("seeds: must be >= 1");
  }
  validate(scenario);

  double lo = options.rate_low;
  double hi = options.rate_high;
  if (lo <= 0.0) {
    double flood_size = scenario.attack.floods.front().packet_size;
    lo = scenario.queue_mode == QueueMode::Markovian ? scenario.service_rate
                                                     : scenario.link_capacity_Bps / flood_size;
  }
  if (hi <= 0.0) {
    hi = 200.0 * lo;
  }
  if (!(lo < hi)) {
    throw ConfigError("rate bounds: low must be below high");
  }

  const double target = options.target_percent;
  const double tol = options.tolerance_pp;
  auto loss_at = [&](double rate) { return cbr_flood_loss(with_flood_rate(scenario, rate), options.seeds); };

  double loss_lo = loss_at(lo);
  double loss_hi = loss_at(hi);
  auto unreachable = [&](const char* why) {
    return CalibrationError(std::string("target ") + format_double(target) + "% unreachable: " + why +
                              " (loss " + format_double(loss_lo) + "% at " + format_double(lo) + " pps, " +
                              format_double(loss_hi) + "% at " + format_double(hi) + " pps)",
                            loss_lo, loss_hi);
  };
  if (loss_lo > target + tol) {
    throw unreachable("the lowest flood rate already loses more");
  }
  if (loss_hi < target - tol) {
    throw unreachable("the highest flood rate loses less");
  }

  CalibrationResult result;
  for (unsigned it = 1; it <= options.max_iterations; ++it) {
    double mid = std::sqrt(lo * hi);
    double loss = loss_at(mid);
    result.iterations = it;
    if (std::abs(loss - target) <= tol) {
      result.flood_rate_pps = mid;
      result.cbr_loss_percent = loss;
      result.scenario = with_flood_rate(scenario, mid);
      return result;
    }
    if (loss < target) {
      lo = mid;
      loss_lo = loss;
    }
    else {
      hi = mid;
      loss_hi = loss;
    }
  }
  throw unreachable("bisection did not converge");
}

namespace {

ScenarioConfig
poisson_scenario(double lambda, double mu, std::optional<std::uint32_t> buffer_K, double horizon, std::uint64_t seed)
{
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.horizon_s = horizon;
  cfg.queue_mode = QueueMode::Markovian;
  cfg.service_rate = mu;
  cfg.buffer_K = buffer_K;
  cfg.window_s = horizon;
  SourceSpec src;
  src.kind = SourceKind::PoissonBackground;
  src.flow = FlowKey{1, 1000, 0, 80, Protocol::Udp};
  src.rate_pps = lambda;
  src.start_s = 0.0;
  src.end_s = horizon;
  cfg.sources.push_back(src);
  return cfg;
}

double
relative_error(double observed, double expected)
{
  return std::abs(observed - expected) / std::max(std::abs(expected), kResidualEpsilon);
}

ValidationCheck
blocking_check(const std::string& name, double lambda, double mu, std::uint32_t K, double horizon,
               const ValidateOptions& options)
{
  constexpr double kTolerance = 0.02;
  LittleAccumulator acc;
  run(poisson_scenario(lambda, mu, K, horizon, options.seed), [&](const PacketEvent& ev) { acc.ingest(ev); },
      SimOptions{options.inject_off_by_one});
  auto r = acc.finish(seconds_to_ns(horizon));
  double expected = mm1k_blocking(lambda, mu, K);
  double observed = r.arrivals == 0 ? 0.0 : static_cast<double>(r.drops) / static_cast<double>(r.arrivals);
  double err = std::abs(observed - expected);
  return {name, err <= kTolerance, err, kTolerance,
          "drop fraction " + format_double(observed) + " vs closed form " + format_double(expected) + " over " +
            std::to_string(r.arrivals) + " arrivals (S=" + std::to_string(K + 1) + ")"};
}

} // namespace

std::vector<ValidationCheck>
cmd_validate(const ValidateOptions& options)
{
  constexpr double kLittleTolerance = 0.05;
  constexpr double kMeanTolerance = 0.05;

  Mm1Metrics oracle = mm1_mean_metrics(options.lambda, options.mu);
  std::vector<ValidationCheck> checks;

  LittleAccumulator acc;
  run(poisson_scenario(options.lambda, options.mu, std::nullopt, options.horizon_s, options.seed),
      [&](const PacketEvent& ev) { acc.ingest(ev); });
  auto little = acc.finish(seconds_to_ns(options.horizon_s));
  checks.push_back({"little_N", little.residual_N <= kLittleTolerance, little.residual_N, kLittleTolerance,
                    "N=" + format_double(little.N_measured) + " lambda*W=" +
                      format_double(little.lambda_measured * little.W_measured)});
  checks.push_back({"little_Nq", little.residual_Nq <= kLittleTolerance, little.residual_Nq, kLittleTolerance,
                    "Nq=" + format_double(little.Nq_measured) + " lambda*Wq=" +
                      format_double(little.lambda_measured * little.Wq_measured)});
  double n_err = relative_error(little.N_measured, oracle.N);
  checks.push_back({"mm1_N", n_err <= kMeanTolerance, n_err, kMeanTolerance,
                    "N=" + format_double(little.N_measured) + " vs " + format_double(oracle.N)});
  double w_err = relative_error(little.W_measured, oracle.W);
  checks.push_back({"mm1_W", w_err <= kMeanTolerance, w_err, kMeanTolerance,
                    "W=" + format_double(little.W_measured) + " vs " + format_double(oracle.W)});

  // 1.15e5 s at lambda=9 gives a little over 1e6 arrivals.
  checks.push_back(blocking_check("mm1k_blocking", 9.0, 10.0, 20, 1.15e5, options));
  checks.push_back(blocking_check("mm1k_small_buffer", 9.0, 10.0, 2, 2e4, options));

  ScenarioConfig def = build_default_scenario();
  def.seed = options.seed;
  for (auto& p : check_all_properties(def, SimOptions{options.inject_off_by_one})) {
    checks.push_back({p.name, p.passed, p.passed ? 0.0 : 1.0, 0.0, p.detail});
  }
  return checks;
}

SweepReport
cmd_sweep(const ScenarioConfig& scenario, const SweepOptions& options)
{
  if (options.seeds == 0) {
    throw ConfigError("seeds: must be >= 1");
  }
  validate(scenario);

  struct Outcome
  {
    ClassificationReport attack;
    ClassificationReport baseline;
  };
  std::vector<Outcome> outcomes(options.seeds);
  std::atomic<unsigned> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    for (unsigned i = next++; i < options.seeds; i = next++) {
      try {
        ScenarioConfig s = scenario;
        s.seed = scenario.seed + i;
        outcomes[i].attack = execute(s).classification;
        outcomes[i].baseline = execute(without_attack(s)).classification;
      }
      catch (...) {
        std::lock_guard lock(error_mutex);
        error = std::current_exception();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, options.seeds);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  for (auto& t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }

  SweepReport r;
  std::uint64_t base_alarms = 0, base_windows = 0, attack_fp = 0, attack_negatives = 0;
  for (unsigned i = 0; i < options.seeds; ++i) {
    const auto& o = outcomes[i];
    r.seeds.push_back(scenario.seed + i);
    r.accuracy.push_back(o.attack.accuracy);
    const auto& bc = o.baseline.confusion;
    base_alarms += o.baseline.alarm_windows;
    base_windows += bc.true_positive + bc.false_positive + bc.true_negative + bc.false_negative;
    attack_fp += o.attack.confusion.false_positive;
    attack_negatives += o.attack.confusion.false_positive + o.attack.confusion.true_negative;
    for (const auto& l : o.attack.detection_latency_s) {
      if (l) {
        r.detection_latency_s.push_back(*l);
      }
      else {
        ++r.missed_attacks;
      }
    }
  }
  r.mean_accuracy = std::accumulate(r.accuracy.begin(), r.accuracy.end(), 0.0) / static_cast<double>(r.accuracy.size());
  r.min_accuracy = *std::min_element(r.accuracy.begin(), r.accuracy.end());
  r.baseline_false_alarm_rate =
    base_windows == 0 ? 0.0 : static_cast<double>(base_alarms) / static_cast<double>(base_windows);
  r.attack_false_alarm_rate =
    attack_negatives == 0 ? 0.0 : static_cast<double>(attack_fp) / static_cast<double>(attack_negatives);
  return r;
}

json
to_json(const SweepReport& r)
{
  json latency{{"values", r.detection_latency_s}, {"missed", r.missed_attacks}};
  if (!r.detection_latency_s.empty()) {
    auto [lo, hi] = std::minmax_element(r.detection_latency_s.begin(), r.detection_latency_s.end());
    latency["min"] = *lo;
    latency["max"] = *hi;
    latency["mean"] = std::accumulate(r.detection_latency_s.begin(), r.detection_latency_s.end(), 0.0) /
                      static_cast<double>(r.detection_latency_s.size());
  }
  return json{{"seeds", r.seeds},
              {"accuracy", r.accuracy},
              {"mean_accuracy", r.mean_accuracy},
              {"min_accuracy", r.min_accuracy},
              {"baseline_false_alarm_rate", r.baseline_false_alarm_rate},
              {"attack_false_alarm_rate", r.attack_false_alarm_rate},
              {"detection_latency_s", latency}};
}

} // namespace floodgate
