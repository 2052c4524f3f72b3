#include "floodgate/detector.hpp"
#include "floodgate/engine.hpp"
#include "floodgate/errors.hpp"
#include "floodgate/properties.hpp"
#include "floodgate/traffic.hpp"

#include <doctest.h>

using namespace floodgate;

namespace {

MetricsWindow
window(double start, double util, std::uint64_t arrivals, std::uint64_t drops, std::uint64_t max_buf)
{
  MetricsWindow w;
  w.window_start = start;
  w.window_end = start + 1.0;
  w.bandwidth_utilization = util;
  w.p_arrivals = arrivals;
  w.p_drops = drops;
  w.max_buffer_occupancy = max_buf;
  return w;
}

std::vector<AlarmSignal>
signals(const std::vector<int>& values)
{
  std::vector<AlarmSignal> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.push_back(AlarmSignal{static_cast<double>(i), values[i], {}});
  }
  return out;
}

} // namespace

TEST_CASE("EWMA hand-stepped recursion")
{
  // alpha 0.3, k 3, floor 1. Expected states stepped by hand:
  // mean' = 0.3 x + 0.7 mean, dev' = 0.3 |x - mean| + 0.7 dev.
  struct Step
  {
    double x, mean, dev;
    bool abrupt;
  };
  const Step steps[] = {
    {5, 5.0, 0.0, false},         {4, 4.7, 0.3, false},
    {6, 5.09, 0.6, false},        {5, 5.063, 0.447, false},
    {5, 5.0441, 0.3318, false},   {4, 4.73087, 0.54549, false},
    {6, 5.111609, 0.762582, false}, {500, 153.5781263, 149.0003247, true},
  };
  EwmaState s;
  for (const auto& st : steps) {
    auto r = ewma_update(s, st.x, 0.3, 3.0, 1.0);
    CAPTURE(st.x);
    CHECK(r.abrupt == st.abrupt);
    CHECK(r.state.mean == doctest::Approx(st.mean).epsilon(1e-9));
    CHECK(r.state.dev == doctest::Approx(st.dev).epsilon(1e-9));
    s = r.state;
  }
}

TEST_CASE("EWMA with alpha 1 tracks the input")
{
  EwmaState s;
  for (double x : {3.0, 9.0, -2.0, 40.0}) {
    s = ewma_update(s, x, 1.0, 3.0, 1.0).state;
    CHECK(s.mean == x);
  }
}

TEST_CASE("constant stream never fires")
{
  EwmaState s;
  for (int i = 0; i < 1000; ++i) {
    auto r = ewma_update(s, 42.0, 0.3, 3.0, 1.0);
    REQUIRE_FALSE(r.abrupt);
    s = r.state;
  }
  CHECK(s.dev == 0.0);
  CHECK(check_ewma_silence(DetectorConfig{}).passed);
}

TEST_CASE("saturation rule at default thresholds")
{
  DetectorConfig cfg;
  SUBCASE("all clauses hold")
  {
    Detector d(cfg, 50);
    auto s = d.decide(window(0, 0.95, 1000, 950, 50));
    CHECK(s.value == 1);
    CHECK(s.fired_conditions.contains(Condition::HighUtilization));
    CHECK(s.fired_conditions.contains(Condition::DropsEqualArrivals));
    CHECK(s.fired_conditions.contains(Condition::BufferOverflow));
  }
  SUBCASE("quiet window")
  {
    Detector d(cfg, 50);
    auto s = d.decide(window(0, 0.30, 100, 0, 0));
    CHECK(s.value == 0);
    CHECK(s.fired_conditions.empty());
  }
  SUBCASE("drop ratio too low")
  {
    Detector d(cfg, 50);
    auto s = d.decide(window(0, 0.95, 1000, 500, 50));
    CHECK(s.value == 0);
    CHECK_FALSE(s.fired_conditions.contains(Condition::DropsEqualArrivals));
  }
  SUBCASE("buffer not full")
  {
    Detector d(cfg, 50);
    CHECK(d.decide(window(0, 0.95, 1000, 950, 49)).value == 0);
    cfg.require_buffer_full = false;
    Detector relaxed(cfg, 50);
    CHECK(relaxed.decide(window(0, 0.95, 1000, 950, 49)).value == 1);
  }
  SUBCASE("no arrivals never alarms")
  {
    Detector d(cfg, 50);
    CHECK(d.decide(window(0, 1.0, 0, 0, 50)).value == 0);
  }
}

TEST_CASE("vacuous thresholds alarm whenever there are arrivals")
{
  DetectorConfig cfg;
  cfg.util_threshold = 0.0;
  cfg.drop_arrival_ratio_threshold = 0.0;
  cfg.require_buffer_full = false;
  std::vector<MetricsWindow> ws = {window(0, 0.1, 5, 0, 0), window(1, 0.0, 1, 0, 0), window(2, 0.0, 0, 0, 0)};
  auto s = signal_series(ws, cfg, 50);
  CHECK(s[0].value == 1);
  CHECK(s[1].value == 1);
  CHECK(s[2].value == 0);
}

TEST_CASE("consecutive windows delay the alarm")
{
  DetectorConfig cfg;
  cfg.consecutive_windows = 2;
  std::vector<MetricsWindow> ws;
  for (int i = 0; i < 5; ++i) {
    bool hot = i >= 1 && i <= 3;
    ws.push_back(hot ? window(i, 1.0, 1000, 950, 50) : window(i, 0.2, 100, 0, 0));
  }
  auto s = signal_series(ws, cfg, 50);
  std::vector<int> got;
  for (const auto& x : s) {
    got.push_back(x.value);
  }
  CHECK(got == std::vector<int>{0, 0, 1, 1, 0});
}

TEST_CASE("EWMA gating requires an abrupt change")
{
  DetectorConfig cfg;
  cfg.ewma_gating = true;
  std::vector<MetricsWindow> ws;
  for (int i = 0; i < 6; ++i) {
    ws.push_back(i < 3 ? window(i, 0.2, 100, 0, 0) : window(i, 1.0, 1000, 950, 50));
  }
  auto s = signal_series(ws, cfg, 50);
  CHECK(s[3].value == 1); // the step
  CHECK(s[3].fired_conditions.contains(Condition::AbruptChange));
}

TEST_CASE("invalid detector settings are rejected")
{
  DetectorConfig cfg;
  cfg.util_threshold = 1.5;
  cfg.ewma_alpha = 0.0;
  cfg.consecutive_windows = 0;
  CHECK(validation_errors(cfg).size() == 3);
  CHECK_THROWS_AS(Detector(cfg, 50), ConfigError);
}

TEST_CASE("condition set text round-trip")
{
  ConditionSet s;
  s.insert(Condition::BufferOverflow);
  s.insert(Condition::HighUtilization);
  CHECK(s.to_string() == "high_utilization;buffer_overflow");
  CHECK(ConditionSet::parse(s.to_string()) == s);
  CHECK(ConditionSet::parse("") == ConditionSet{});
  CHECK_THROWS_AS(ConditionSet::parse("nonsense"), InputError);
}

TEST_CASE("classification accuracy")
{
  GroundTruth truth{{{2.0, 4.0}}, 4.0};
  SUBCASE("signals identical to truth")
  {
    auto r = classification_report(signals({0, 0, 1, 1}), truth, 1.0);
    CHECK(r.accuracy == 1.0);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    REQUIRE(r.detection_latency_s.size() == 1);
    CHECK(r.detection_latency_s[0] == 0.0);
  }
  SUBCASE("all zero, half attack")
  {
    auto r = classification_report(signals({0, 0, 0, 0}), truth, 1.0);
    CHECK(r.accuracy == 0.5);
    CHECK(r.recall == 0.0);
    CHECK_FALSE(r.detection_latency_s[0].has_value());
  }
  SUBCASE("late detection and a false alarm")
  {
    auto r = classification_report(signals({1, 0, 0, 1}), truth, 1.0);
    CHECK(r.confusion.true_positive == 1);
    CHECK(r.confusion.false_positive == 1);
    CHECK(r.confusion.false_negative == 1);
    CHECK(r.confusion.true_negative == 1);
    CHECK(r.precision == 0.5);
    CHECK(*r.detection_latency_s[0] == doctest::Approx(1.0));
    CHECK(r.alarm_windows == 2);
  }
  SUBCASE("horizon mismatch")
  {
    CHECK_THROWS_AS(classification_report(signals({0, 0, 1}), truth, 1.0), InputError);
    auto shifted = signals({0, 0, 1, 1});
    shifted[2].window_start = 2.5;
    CHECK_THROWS_AS(classification_report(shifted, truth, 1.0), InputError);
  }
}

TEST_CASE("alarm runs")
{
  auto runs = alarm_runs(signals({1, 1, 0, 0, 1, 0, 1, 1, 1}));
  using R = std::pair<std::size_t, std::size_t>;
  CHECK(runs == std::vector<R>{{0, 1}, {4, 4}, {6, 8}});
  CHECK(alarm_runs(signals({0, 0})).empty());
}

TEST_CASE("default scenario raises exactly three alarms and none without floods")
{
  auto cfg = build_default_scenario();
  auto s = signal_series(series(run(cfg), cfg.window_s), cfg.detector, cfg.buffer_K);
  auto runs = alarm_runs(s);
  REQUIRE(runs.size() == 3);
  const std::size_t starts[] = {20, 45, 70};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(runs[i].first + 1 >= starts[i]);
    CHECK(runs[i].first <= starts[i] + 1);
  }

  auto quiet = without_attack(cfg);
  for (const auto& x : signal_series(series(run(quiet), 1.0), quiet.detector, quiet.buffer_K)) {
    REQUIRE(x.value == 0);
  }
}
