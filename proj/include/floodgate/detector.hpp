#pragma once

#include "floodgate/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace floodgate {

struct DetectorConfig
{
  double util_threshold = 0.85;
  double drop_arrival_ratio_threshold = 0.9;
  bool require_buffer_full = true;
  double ewma_alpha = 0.3;
  double ewma_k = 3.0;
  std::uint32_t consecutive_windows = 1;
  /// Make the abrupt-change stage part of the alarm conjunction.
  bool ewma_gating = false;

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

std::vector<std::string> validation_errors(const DetectorConfig& cfg);

enum class Condition : std::uint8_t {
  HighUtilization = 1 << 0,
  DropsEqualArrivals = 1 << 1,
  BufferOverflow = 1 << 2,
  AbruptChange = 1 << 3,
};

std::string_view to_string(Condition c) noexcept;

class ConditionSet
{
public:
  constexpr ConditionSet() = default;

  constexpr void
  insert(Condition c) noexcept
  {
    m_bits |= static_cast<std::uint8_t>(c);
  }

  constexpr bool
  contains(Condition c) const noexcept
  {
    return (m_bits & static_cast<std::uint8_t>(c)) != 0;
  }

  constexpr bool
  empty() const noexcept
  {
    return m_bits == 0;
  }

  /// Semicolon-joined condition names, in a fixed order.
  std::string to_string() const;
  static ConditionSet parse(std::string_view text);

  friend bool operator==(const ConditionSet&, const ConditionSet&) = default;

private:
  std::uint8_t m_bits = 0;
};

struct AlarmSignal
{
  double window_start = 0.0;
  int value = 0;
  ConditionSet fired_conditions;

  friend bool operator==(const AlarmSignal&, const AlarmSignal&) = default;
};

/// Exponentially weighted mean and absolute deviation of one metric.
struct EwmaState
{
  double mean = 0.0;
  double dev = 0.0;
  bool primed = false;
};

struct EwmaResult
{
  EwmaState state;
  bool abrupt = false;
};

/// One EWMA step. The first observation primes the state and never fires.
/// `floor` lower-bounds the deviation used in the abrupt test.
EwmaResult ewma_update(const EwmaState& state, double x, double alpha, double k, double floor);

/// Streaming two-stage detector: abrupt-change stage over drops, arrivals
/// and utilization, then the saturation rule that drives the alarm.
class Detector
{
public:
  Detector(DetectorConfig cfg, std::optional<std::uint32_t> buffer_K);

  AlarmSignal decide(const MetricsWindow& window);

  const DetectorConfig&
  config() const noexcept
  {
    return m_cfg;
  }

private:
  DetectorConfig m_cfg;
  std::optional<std::uint32_t> m_buffer_K;
  EwmaState m_drops;
  EwmaState m_arrivals;
  EwmaState m_utilization;
  std::uint32_t m_streak = 0;
};

std::vector<AlarmSignal> signal_series(const std::vector<MetricsWindow>& windows,
                                       const DetectorConfig& cfg,
                                       std::optional<std::uint32_t> buffer_K);

/// Half-open attack interval [start, end) in seconds.
struct Interval
{
  double start = 0.0;
  double end = 0.0;
};

struct GroundTruth
{
  std::vector<Interval> attacks;
  double horizon_s = 0.0;
};

struct ConfusionCounts
{
  std::uint64_t true_positive = 0;
  std::uint64_t false_positive = 0;
  std::uint64_t true_negative = 0;
  std::uint64_t false_negative = 0;
};

struct ClassificationReport
{
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  ConfusionCounts confusion;
  /// Seconds from each attack's start to the start of the first alarm window
  /// overlapping it; nullopt when the attack was missed.
  std::vector<std::optional<double>> detection_latency_s;
  std::uint64_t alarm_windows = 0;
};

/// A window counts as attack iff it overlaps an attack interval. Throws
/// InputError when the signals do not tile [0, truth.horizon_s) with windows
/// of width `window_s`.
ClassificationReport classification_report(const std::vector<AlarmSignal>& signals,
                                           const GroundTruth& truth,
                                           double window_s);

/// Maximal runs of value 1 as [first window index, last window index].
std::vector<std::pair<std::size_t, std::size_t>> alarm_runs(const std::vector<AlarmSignal>& signals);

} // namespace floodgate
