#include "floodgate/detector.hpp"

#include "floodgate/errors.hpp"

#include <cmath>
#include <string>

namespace floodgate {

namespace {

constexpr Condition kConditionOrder[] = {
  Condition::HighUtilization,
  Condition::DropsEqualArrivals,
  Condition::BufferOverflow,
  Condition::AbruptChange,
};

// Deviation floors for the abrupt-change test, in each metric's own units.
constexpr double kCountFloor = 1.0;
constexpr double kUtilizationFloor = 0.01;

} // namespace

std::vector<std::string>
validation_errors(const DetectorConfig& cfg)
{
  std::vector<std::string> out;
  // Zero thresholds are allowed: they make the clause vacuous.
  if (!(cfg.util_threshold >= 0.0 && cfg.util_threshold <= 1.0)) {
    out.emplace_back("util_threshold: must be in [0, 1]");
  }
  if (!(cfg.drop_arrival_ratio_threshold >= 0.0 && cfg.drop_arrival_ratio_threshold <= 1.0)) {
    out.emplace_back("drop_arrival_ratio_threshold: must be in [0, 1]");
  }
  if (!(cfg.ewma_alpha > 0.0 && cfg.ewma_alpha <= 1.0)) {
    out.emplace_back("ewma_alpha: must be in (0, 1]");
  }
  if (!(cfg.ewma_k > 0.0 && std::isfinite(cfg.ewma_k))) {
    out.emplace_back("ewma_k: must be > 0");
  }
  if (cfg.consecutive_windows == 0) {
    out.emplace_back("consecutive_windows: must be >= 1");
  }
  return out;
}

std::string_view
to_string(Condition c) noexcept
{
  switch (c) {
  case Condition::HighUtilization:
    return "high_utilization";
  case Condition::DropsEqualArrivals:
    return "drops_equal_arrivals";
  case Condition::BufferOverflow:
    return "buffer_overflow";
  case Condition::AbruptChange:
    return "abrupt_change";
  }
  return "?";
}

std::string
ConditionSet::to_string() const
{
  std::string out;
  for (Condition c : kConditionOrder) {
    if (contains(c)) {
      if (!out.empty()) {
        out += ';';
      }
      out += floodgate::to_string(c);
    }
  }
  return out;
}

ConditionSet
ConditionSet::parse(std::string_view text)
{
  ConditionSet set;
  while (!text.empty()) {
    auto cut = text.find(';');
    auto name = text.substr(0, cut);
    bool found = false;
    for (Condition c : kConditionOrder) {
      if (floodgate::to_string(c) == name) {
        set.insert(c);
        found = true;
      }
    }
    if (!found) {
      throw InputError("unknown condition '" + std::string(name) + "'");
    }
    text = cut == std::string_view::npos ? std::string_view{} : text.substr(cut + 1);
  }
  return set;
}

EwmaResult
ewma_update(const EwmaState& state, double x, double alpha, double k, double floor)
{
  if (!state.primed) {
    return {EwmaState{x, 0.0, true}, false};
  }
  double deviation = std::abs(x - state.mean);
  EwmaResult r;
  r.abrupt = deviation > k * std::max(state.dev, floor);
  r.state.mean = alpha * x + (1.0 - alpha) * state.mean;
  r.state.dev = alpha * deviation + (1.0 - alpha) * state.dev;
  r.state.primed = true;
  return r;
}

Detector::Detector(DetectorConfig cfg, std::optional<std::uint32_t> buffer_K)
  : m_cfg(cfg)
  , m_buffer_K(buffer_K)
{
  auto errors = validation_errors(m_cfg);
  if (!errors.empty()) {
    throw ConfigError(std::move(errors));
  }
}

AlarmSignal
Detector::decide(const MetricsWindow& window)
{
  AlarmSignal out;
  out.window_start = window.window_start;

  // Stage one: abrupt change.
  bool abrupt = false;
  auto step = [&](EwmaState& s, double x, double floor) {
    auto r = ewma_update(s, x, m_cfg.ewma_alpha, m_cfg.ewma_k, floor);
    s = r.state;
    abrupt = abrupt || r.abrupt;
  };
  step(m_drops, static_cast<double>(window.p_drops), kCountFloor);
  step(m_arrivals, static_cast<double>(window.p_arrivals), kCountFloor);
  step(m_utilization, window.bandwidth_utilization, kUtilizationFloor);
  if (abrupt) {
    out.fired_conditions.insert(Condition::AbruptChange);
  }

  // Stage two: saturation rule.
  bool high_util = window.bandwidth_utilization >= m_cfg.util_threshold;
  bool drops_match = window.p_arrivals > 0 &&
                     static_cast<double>(window.p_drops) >=
                       m_cfg.drop_arrival_ratio_threshold * static_cast<double>(window.p_arrivals);
  bool overflow = m_buffer_K && window.max_buffer_occupancy >= *m_buffer_K;
  if (high_util) {
    out.fired_conditions.insert(Condition::HighUtilization);
  }
  if (drops_match) {
    out.fired_conditions.insert(Condition::DropsEqualArrivals);
  }
  if (overflow) {
    out.fired_conditions.insert(Condition::BufferOverflow);
  }

  bool holds = high_util && drops_match && (!m_cfg.require_buffer_full || overflow) &&
               (!m_cfg.ewma_gating || abrupt);
  m_streak = holds ? m_streak + 1 : 0;
  out.value = m_streak >= m_cfg.consecutive_windows ? 1 : 0;
  return out;
}

std::vector<AlarmSignal>
signal_series(const std::vector<MetricsWindow>& windows,
              const DetectorConfig& cfg,
              std::optional<std::uint32_t> buffer_K)
{
  Detector detector(cfg, buffer_K);
  std::vector<AlarmSignal> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    out.push_back(detector.decide(w));
  }
  return out;
}

ClassificationReport
classification_report(const std::vector<AlarmSignal>& signals, const GroundTruth& truth, double window_s)
{
  if (!(window_s > 0.0)) {
    throw InputError("window width must be positive");
  }
  const TimeNs horizon = seconds_to_ns(truth.horizon_s);
  const TimeNs width = seconds_to_ns(window_s);
  const std::size_t expected = horizon <= 0 ? 0 : static_cast<std::size_t>((horizon + width - 1) / width);
  if (signals.size() != expected) {
    throw InputError("signals cover " + std::to_string(signals.size()) + " windows but the horizon needs " +
                     std::to_string(expected));
  }

  ClassificationReport report;
  report.detection_latency_s.assign(truth.attacks.size(), std::nullopt);
  auto& c = report.confusion;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    TimeNs start = static_cast<TimeNs>(i) * width;
    TimeNs end = std::min(start + width, horizon);
    if (seconds_to_ns(signals[i].window_start) != start) {
      throw InputError("signal " + std::to_string(i) + " does not start at its window boundary");
    }
    bool attack = false;
    for (std::size_t a = 0; a < truth.attacks.size(); ++a) {
      TimeNs as = seconds_to_ns(truth.attacks[a].start);
      TimeNs ae = seconds_to_ns(truth.attacks[a].end);
      if (start < ae && as < end) {
        attack = true;
        if (signals[i].value == 1 && !report.detection_latency_s[a]) {
          report.detection_latency_s[a] = std::max(0.0, ns_to_seconds(start - as));
        }
      }
    }
    bool alarm = signals[i].value == 1;
    report.alarm_windows += alarm ? 1 : 0;
    if (alarm && attack) {
      ++c.true_positive;
    }
    else if (alarm) {
      ++c.false_positive;
    }
    else if (attack) {
      ++c.false_negative;
    }
    else {
      ++c.true_negative;
    }
  }
  auto ratio = [](std::uint64_t num, std::uint64_t den, double if_empty) {
    return den == 0 ? if_empty : static_cast<double>(num) / static_cast<double>(den);
  };
  std::uint64_t total = signals.size();
  report.accuracy = ratio(c.true_positive + c.true_negative, total, 1.0);
  // With nothing to find and nothing flagged, precision and recall are 1.
  bool no_positives = c.true_positive + c.false_negative == 0;
  report.precision = ratio(c.true_positive, c.true_positive + c.false_positive, no_positives ? 1.0 : 0.0);
  report.recall = ratio(c.true_positive, c.true_positive + c.false_negative, 1.0);
  return report;
}

std::vector<std::pair<std::size_t, std::size_t>>
alarm_runs(const std::vector<AlarmSignal>& signals)
{
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (signals[i].value != 1) {
      continue;
    }
    if (!runs.empty() && runs.back().second + 1 == i) {
      runs.back().second = i;
    }
    else {
      runs.emplace_back(i, i);
    }
  }
  return runs;
}

} // namespace floodgate
