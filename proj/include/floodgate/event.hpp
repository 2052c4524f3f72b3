#pragma once

#include "floodgate/flow.hpp"
#include "floodgate/time.hpp"

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace floodgate {

enum class EventKind : std::uint8_t { Arrival, ServiceStart, Departure, Drop };

std::string_view to_string(EventKind k) noexcept;
EventKind parse_event_kind(std::string_view text);

using PacketId = std::uint64_t;

/// One step in a packet's lifecycle at the server.
struct PacketEvent
{
  TimeNs time = 0;
  EventKind kind = EventKind::Arrival;
  PacketId packet_id = 0;
  FlowKey flow;
  std::uint32_t size = 0; // bytes

  friend bool operator==(const PacketEvent&, const PacketEvent&) = default;
};

/// The complete ordered event list of one run, up to (excluding) the horizon.
struct EventTrace
{
  std::vector<PacketEvent> events;
  TimeNs horizon = 0;
};

using EventSink = std::function<void(const PacketEvent&)>;

} // namespace floodgate
