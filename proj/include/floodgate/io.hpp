#pragma once

#include "floodgate/analytics.hpp"
#include "floodgate/detector.hpp"
#include "floodgate/event.hpp"
#include "floodgate/metrics.hpp"
#include "floodgate/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace floodgate {

// Scenario files are JSON with a "schema_version" field. Unknown or
// misplaced fields are rejected; every problem is reported in one
// ConfigError.
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);
double parse_double(std::string_view text);

// CSV writers. Counters are written as integers, times and ratios with
// round-trip precision.
void write_trace_csv(std::ostream& os, const EventTrace& trace);
void write_metrics_csv(std::ostream& os, const std::vector<MetricsWindow>& windows);
void write_alarms_csv(std::ostream& os, const std::vector<AlarmSignal>& signals);
void write_loss_csv(std::ostream& os, const LossTable& table);

/// Streams the trace CSV row by row, for use as an EventSink.
class TraceCsvWriter
{
public:
  explicit TraceCsvWriter(std::ostream& os);
  void operator()(const PacketEvent& ev);

private:
  std::ostream* m_os;
};

// Readers for the same formats. Metrics rows carry no window end, so it is
// reconstructed from the next row's start and, for the last row, from
// `window_s` capped at `horizon_s`.
std::vector<PacketEvent> read_trace_csv(std::istream& is);
std::vector<MetricsWindow> read_metrics_csv(std::istream& is, double window_s, double horizon_s);
std::vector<AlarmSignal> read_alarms_csv(std::istream& is);

nlohmann::json to_json(const LittleReport& r);
nlohmann::json to_json(const ClassificationReport& r);
nlohmann::json to_json(const LossTable& t);

} // namespace floodgate
