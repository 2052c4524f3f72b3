#pragma once

#include "floodgate/event.hpp"
#include "floodgate/time.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace floodgate {

/// Feature vector of one time window.
struct MetricsWindow
{
  double window_start = 0.0; // seconds
  double window_end = 0.0;
  std::uint64_t p_arrivals = 0;
  std::uint64_t p_departures = 0;
  std::uint64_t p_drops = 0;
  std::uint64_t bytes_arrived = 0;
  /// Bytes of packets whose departure falls in the window.
  std::uint64_t bytes_transmitted = 0;
  /// Fraction of the window during which the link was transmitting; a
  /// transmission straddling a boundary counts in each window in proportion
  /// to its time there.
  double bandwidth_utilization = 0.0;
  std::uint64_t flow_count = 0;
  double avg_packet_size = 0.0;
  std::uint64_t max_buffer_occupancy = 0;
  /// Time-averaged number of packets waiting (excluding the one in service).
  double mean_queue_length = 0.0;
  /// Mean of (service start - arrival) over departures in the window.
  double mean_wait = 0.0;

  friend bool operator==(const MetricsWindow&, const MetricsWindow&) = default;
};

/// Folds an ordered event stream into consecutive windows of fixed width.
/// Queue length and server state are reconstructed from the events.
class MetricsAccumulator
{
public:
  MetricsAccumulator(TimeNs window_width, TimeNs horizon);

  /// Events must come in nondecreasing time order; any windows that end at
  /// or before `event.time` are closed first.
  void ingest(const PacketEvent& event);

  /// Closes every remaining window up to the horizon and returns all windows.
  std::vector<MetricsWindow> finish();

  const std::vector<MetricsWindow>&
  closed() const noexcept
  {
    return m_closed;
  }

  std::size_t
  queue_length() const noexcept
  {
    return m_waiting;
  }

private:
  void advance_to(TimeNs t);
  void close_window();
  void settle_pending_arrival();

  TimeNs m_width;
  TimeNs m_horizon;
  TimeNs m_window_start = 0;
  TimeNs m_window_end = 0;
  TimeNs m_last_time = 0;

  std::uint64_t m_waiting = 0;
  bool m_busy = false;
  // An Arrival is only known to be buffered once the next event is not its
  // own ServiceStart or Drop.
  std::optional<PacketId> m_pending_arrival;
  struct Lifecycle
  {
    TimeNs arrival = 0;
    TimeNs wait = 0;
  };
  std::unordered_map<PacketId, Lifecycle> m_packets;

  // open-window accumulators
  MetricsWindow m_open;
  std::unordered_set<FlowKey, FlowKeyHash> m_flows;
  TimeNs m_busy_ns = 0;
  long double m_queue_integral = 0.0L; // packet-nanoseconds
  TimeNs m_wait_sum_ns = 0;

  std::vector<MetricsWindow> m_closed;
};

/// Window series covering [0, trace.horizon); the last window is shorter when
/// the width does not divide the horizon. Throws ConfigError if width <= 0.
std::vector<MetricsWindow> series(const EventTrace& trace, double window_width_s);

} // namespace floodgate
