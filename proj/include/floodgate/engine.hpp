#pragma once

#include "floodgate/event.hpp"
#include "floodgate/scenario.hpp"

namespace floodgate {

struct SimOptions
{
  /// Test hook: the buffer admits one packet beyond its capacity.
  bool off_by_one_buffer = false;
};

/// Runs the scenario and streams every event to `sink` in dispatch order.
/// Simultaneous events dispatch departures before arrivals, then by
/// scheduling order. Events at or after the horizon are not dispatched.
/// Throws ConfigError if the scenario is invalid.
void run(const ScenarioConfig& scenario, const EventSink& sink, SimOptions options = {});

/// Runs the scenario and collects the complete trace.
EventTrace run(const ScenarioConfig& scenario, SimOptions options = {});

} // namespace floodgate
