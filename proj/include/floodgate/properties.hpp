#pragma once

#include "floodgate/detector.hpp"
#include "floodgate/engine.hpp"
#include "floodgate/event.hpp"
#include "floodgate/metrics.hpp"
#include "floodgate/scenario.hpp"

#include <string>
#include <vector>

namespace floodgate {

struct PropertyResult
{
  std::string name;
  bool passed = false;
  std::string detail;
};

// Trace-level invariants, each checked directly from the event list.

/// arrivals == departures + drops + packets still in the system.
PropertyResult check_conservation(const EventTrace& trace);

/// Served packets depart in the order they arrived.
PropertyResult check_fcfs(const EventTrace& trace);

/// After all events at a timestamp, at most K waiting plus one in service.
PropertyResult check_buffer_bound(const EventTrace& trace, std::optional<std::uint32_t> buffer_K);

/// Arrivals of each CBR flow are spaced by exactly the same interval.
PropertyResult check_cbr_spacing(const EventTrace& trace, const ScenarioConfig& scenario);

/// Raising either threshold never turns a 0 window into a 1.
PropertyResult check_signal_monotonicity(const std::vector<MetricsWindow>& windows,
                                         const DetectorConfig& cfg,
                                         std::optional<std::uint32_t> buffer_K);

/// A constant stream never trips the abrupt-change test.
PropertyResult check_ewma_silence(const DetectorConfig& cfg);

/// Every property above on one run of `scenario`.
std::vector<PropertyResult> check_all_properties(const ScenarioConfig& scenario, SimOptions options = {});

} // namespace floodgate
