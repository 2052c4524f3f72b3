#pragma once

#include "floodgate/event.hpp"
#include "floodgate/rng.hpp"
#include "floodgate/scenario.hpp"

#include <cstdint>
#include <optional>

namespace floodgate {

/// Run-time state of one SourceSpec. CBR emits one packet every 1/rate
/// seconds exactly; Poisson and Flood sources draw exponential gaps (a flood
/// releases `burst` packets per draw); FTP sources wake every round trip and
/// send as many packets as their AIMD window allows.
class TrafficSource
{
public:
  TrafficSource(SourceSpec spec, RandomStream rng);

  /// The first emission instant, or nullopt if it would not be before end.
  std::optional<TimeNs> first_arrival();

  /// The emission instant after `now`; before the start this is the first
  /// arrival. nullopt once past the active interval.
  std::optional<TimeNs> next_arrival(TimeNs now);

  /// Packets released at the current emission instant.
  std::uint32_t packets_due() const noexcept;

  /// Records that `n` packets were handed to the queue.
  void on_sent(std::uint32_t n) noexcept;

  /// Window feedback for FTP flows; other kinds ignore it. A Departure
  /// acknowledges one packet and grows the window by 1/window up to the cap;
  /// a Drop halves it (floor 1).
  void ack_feedback(const PacketEvent& event) noexcept;

  const SourceSpec&
  spec() const noexcept
  {
    return m_spec;
  }

  double
  window() const noexcept
  {
    return m_window;
  }

  std::uint32_t
  unacknowledged() const noexcept
  {
    return m_unacked;
  }

private:
  std::optional<TimeNs> bounded(TimeNs t) const noexcept;
  TimeNs random_gap(double rate);

  SourceSpec m_spec;
  RandomStream m_rng;
  TimeNs m_start;
  TimeNs m_end;
  TimeNs m_cbr_interval = 0;
  double m_window = 1.0;
  std::uint32_t m_unacked = 0;
};

/// Flood rate used by the default scenario (packets/s, per flood).
inline constexpr double kDefaultFloodRatePps = 26000.0;

/// One server, mixed CBR/UDP and FTP/TCP clients, a Poisson background flow
/// and three sequential UDP floods aimed at ports 21, 5060 and 1580.
ScenarioConfig build_default_scenario();

} // namespace floodgate
