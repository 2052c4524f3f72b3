#pragma once

#include "floodgate/event.hpp"
#include "floodgate/rng.hpp"

#include <cstdint>
#include <deque>
#include <optional>

namespace floodgate {

struct Packet
{
  PacketId id = 0;
  FlowKey flow;
  std::uint32_t size = 0;
  TimeNs arrival = 0;
  std::uint32_t source = 0;
};

/// How long the server takes to transmit one packet.
class ServiceModel
{
public:
  static ServiceModel markovian(double mu, RandomStream rng);
  static ServiceModel deterministic(double link_capacity_Bps);

  /// At least 1 ns.
  TimeNs duration(const Packet& p);

private:
  ServiceModel() = default;

  bool m_markovian = false;
  double m_rate = 0.0; // mu, or bytes/s
  std::optional<RandomStream> m_rng;
};

enum class Admission : std::uint8_t { Accepted, Dropped };

/// Single-server FCFS queue with a finite (or unbounded) waiting buffer.
/// Buffer capacity counts waiting packets only, so the system holds at most
/// capacity + 1 packets.
class ServerQueue
{
public:
  ServerQueue(std::optional<std::uint32_t> capacity, ServiceModel service);

  struct EnqueueResult
  {
    Admission admission;
    /// Set when the packet went straight into service.
    std::optional<TimeNs> departure_at;
  };

  /// Emits ServiceStart or Drop for `packet` (the Arrival is the caller's).
  EnqueueResult enqueue(const Packet& packet, TimeNs now, const EventSink& emit);

  struct CompletionResult
  {
    PacketEvent departure;
    Packet packet;
    /// Set when the next buffered packet entered service.
    std::optional<TimeNs> next_departure_at;
  };

  /// Emits the Departure and, if the buffer is nonempty, the next ServiceStart.
  /// Throws InternalStateError if nothing is in service.
  CompletionResult complete_service(TimeNs now, const EventSink& emit);

  bool
  busy() const noexcept
  {
    return m_in_service.has_value();
  }

  std::size_t
  buffered() const noexcept
  {
    return m_buffer.size();
  }

  std::optional<std::uint32_t>
  capacity() const noexcept
  {
    return m_capacity;
  }

  /// Test hook: admit one packet more than the configured capacity.
  void
  inject_off_by_one(bool on) noexcept
  {
    m_off_by_one = on;
  }

private:
  TimeNs start_service(const Packet& p, TimeNs now, const EventSink& emit);

  std::optional<std::uint32_t> m_capacity;
  ServiceModel m_service;
  std::deque<Packet> m_buffer;
  std::optional<Packet> m_in_service;
  bool m_off_by_one = false;
};

} // namespace floodgate
