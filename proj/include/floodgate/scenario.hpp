#pragma once

#include "floodgate/detector.hpp"
#include "floodgate/flow.hpp"
#include "floodgate/time.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace floodgate {

enum class SourceKind : std::uint8_t { PoissonBackground, Cbr, Ftp, Flood };

std::string_view to_string(SourceKind k) noexcept;
SourceKind parse_source_kind(std::string_view text);

/// One traffic source. Which fields matter depends on `kind`:
///  - Cbr, PoissonBackground: rate_pps
///  - Flood: rate_pps (mean packets/s) and burst (packets released together;
///    1 gives plain Poisson arrivals)
///  - Ftp: window (initial), window_cap and round_trip_s (the send round)
struct SourceSpec
{
  SourceKind kind = SourceKind::Cbr;
  FlowKey flow;
  double rate_pps = 0.0;
  std::uint32_t packet_size = 512;
  double start_s = 0.0;
  double end_s = 0.0;

  std::uint32_t burst = 1;

  double window = 1.0;
  double window_cap = 8.0;
  double round_trip_s = 0.05;

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

struct AttackSchedule
{
  std::vector<SourceSpec> floods;

  friend bool operator==(const AttackSchedule&, const AttackSchedule&) = default;
};

enum class QueueMode : std::uint8_t {
  Markovian,     // service ~ Exponential(mu), independent of packet size
  Deterministic, // service = size / link capacity
};

struct ScenarioConfig
{
  static constexpr int kSchemaVersion = 1;

  std::uint64_t seed = 1;
  double horizon_s = 100.0;
  double link_capacity_Bps = 1'250'000.0;
  QueueMode queue_mode = QueueMode::Deterministic;
  double service_rate = 0.0; // mu, packets/s; Markovian mode only
  /// Waiting slots, excluding the packet in service; nullopt means unbounded.
  std::optional<std::uint32_t> buffer_K = 50;
  std::vector<SourceSpec> sources;
  AttackSchedule attack;
  double window_s = 1.0;
  DetectorConfig detector;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Returns one diagnostic per violated field; empty when valid.
std::vector<std::string> validation_errors(const ScenarioConfig& cfg);

/// Throws ConfigError carrying every diagnostic.
void validate(const ScenarioConfig& cfg);

/// Sources in engine order: legitimate sources first, then floods.
std::vector<SourceSpec> all_sources(const ScenarioConfig& cfg);

/// Copy of `cfg` with the attack schedule removed.
ScenarioConfig without_attack(ScenarioConfig cfg);

} // namespace floodgate
