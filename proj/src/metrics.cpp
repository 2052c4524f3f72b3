#include "floodgate/metrics.hpp"

#include "floodgate/errors.hpp"

#include <algorithm>
#include <string>

namespace floodgate {

MetricsAccumulator::MetricsAccumulator(TimeNs window_width, TimeNs horizon)
  : m_width(window_width)
  , m_horizon(horizon)
{
  if (window_width <= 0) {
    throw ConfigError("window_s: must be > 0");
  }
  m_window_end = std::min(m_width, m_horizon);
  m_open.window_start = 0.0;
  m_open.window_end = ns_to_seconds(m_window_end);
}

void
MetricsAccumulator::settle_pending_arrival()
{
  if (m_pending_arrival) {
    m_pending_arrival.reset();
    ++m_waiting;
    m_open.max_buffer_occupancy = std::max(m_open.max_buffer_occupancy, m_waiting);
  }
}

void
MetricsAccumulator::advance_to(TimeNs t)
{
  auto integrate = [&](TimeNs until) {
    TimeNs dt = until - m_last_time;
    if (m_busy) {
      m_busy_ns += dt;
    }
    m_queue_integral += static_cast<long double>(m_waiting) * static_cast<long double>(dt);
    m_last_time = until;
  };
  while (m_window_start < m_horizon && t >= m_window_end) {
    integrate(m_window_end);
    close_window();
  }
  if (t > m_last_time) {
    integrate(t);
  }
}

void
MetricsAccumulator::close_window()
{
  auto width = static_cast<double>(m_window_end - m_window_start);
  MetricsWindow w = m_open;
  w.window_start = ns_to_seconds(m_window_start);
  w.window_end = ns_to_seconds(m_window_end);
  w.flow_count = m_flows.size();
  w.avg_packet_size = w.p_arrivals > 0
                        ? static_cast<double>(w.bytes_arrived) / static_cast<double>(w.p_arrivals)
                        : 0.0;
  w.bandwidth_utilization = std::clamp(static_cast<double>(m_busy_ns) / width, 0.0, 1.0);
  w.mean_queue_length = static_cast<double>(m_queue_integral / static_cast<long double>(width));
  w.mean_wait = w.p_departures > 0 ? ns_to_seconds(m_wait_sum_ns) / static_cast<double>(w.p_departures)
                                   : 0.0;
  m_closed.push_back(w);

  m_window_start = m_window_end;
  m_window_end = std::min(m_window_start + m_width, m_horizon);
  m_open = MetricsWindow{};
  m_open.max_buffer_occupancy = m_waiting;
  m_flows.clear();
  m_busy_ns = 0;
  m_queue_integral = 0.0L;
  m_wait_sum_ns = 0;
}

void
MetricsAccumulator::ingest(const PacketEvent& event)
{
  if (event.time < m_last_time) {
    throw OrderingError("event at " + std::to_string(event.time) + " ns arrived after " +
                        std::to_string(m_last_time) + " ns");
  }
  if (event.time >= m_horizon) {
    throw OrderingError("event at " + std::to_string(event.time) + " ns is past the horizon");
  }
  bool follows_pending = m_pending_arrival && *m_pending_arrival == event.packet_id &&
                         (event.kind == EventKind::ServiceStart || event.kind == EventKind::Drop);
  if (!follows_pending) {
    settle_pending_arrival();
  }
  advance_to(event.time);

  auto lifecycle = [&]() -> Lifecycle& {
    auto it = m_packets.find(event.packet_id);
    if (it == m_packets.end()) {
      throw IntegrityError("packet " + std::to_string(event.packet_id) + " has no arrival");
    }
    return it->second;
  };

  switch (event.kind) {
  case EventKind::Arrival:
    ++m_open.p_arrivals;
    m_open.bytes_arrived += event.size;
    m_flows.insert(event.flow);
    m_packets[event.packet_id] = Lifecycle{event.time, 0};
    m_pending_arrival = event.packet_id;
    break;
  case EventKind::ServiceStart: {
    auto& lc = lifecycle();
    lc.wait = event.time - lc.arrival;
    if (follows_pending) {
      m_pending_arrival.reset();
    }
    else {
      if (m_waiting == 0) {
        throw IntegrityError("service start with an empty buffer");
      }
      --m_waiting;
    }
    m_busy = true;
    break;
  }
  case EventKind::Departure: {
    auto& lc = lifecycle();
    ++m_open.p_departures;
    m_open.bytes_transmitted += event.size;
    m_wait_sum_ns += lc.wait;
    m_packets.erase(event.packet_id);
    m_busy = false;
    break;
  }
  case EventKind::Drop:
    lifecycle();
    ++m_open.p_drops;
    m_packets.erase(event.packet_id);
    if (follows_pending) {
      m_pending_arrival.reset();
    }
    break;
  }
}

std::vector<MetricsWindow>
MetricsAccumulator::finish()
{
  settle_pending_arrival();
  advance_to(m_horizon);
  return m_closed;
}

std::vector<MetricsWindow>
series(const EventTrace& trace, double window_width_s)
{
  if (!(window_width_s > 0.0)) {
    throw ConfigError("window_s: must be > 0");
  }
  MetricsAccumulator acc(std::max<TimeNs>(1, seconds_to_ns(window_width_s)), trace.horizon);
  for (const auto& ev : trace.events) {
    acc.ingest(ev);
  }
  return acc.finish();
}

} // namespace floodgate
