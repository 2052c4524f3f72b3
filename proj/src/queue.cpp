#include "floodgate/queue.hpp"

#include "floodgate/errors.hpp"

#include <algorithm>
#include <cmath>

namespace floodgate {

ServiceModel
ServiceModel::markovian(double mu, RandomStream rng)
{
  if (!(mu > 0.0)) {
    throw InvalidParameter("service rate must be positive");
  }
  ServiceModel m;
  m.m_markovian = true;
  m.m_rate = mu;
  m.m_rng.emplace(rng);
  return m;
}

ServiceModel
ServiceModel::deterministic(double link_capacity_Bps)
{
  if (!(link_capacity_Bps > 0.0)) {
    throw InvalidParameter("link capacity must be positive");
  }
  ServiceModel m;
  m.m_rate = link_capacity_Bps;
  return m;
}

TimeNs
ServiceModel::duration(const Packet& p)
{
  double seconds = m_markovian ? sample_exponential(m_rate, *m_rng)
                               : static_cast<double>(p.size) / m_rate;
  return std::max<TimeNs>(1, seconds_to_ns(seconds));
}

ServerQueue::ServerQueue(std::optional<std::uint32_t> capacity, ServiceModel service)
  : m_capacity(capacity)
  , m_service(std::move(service))
{
}

TimeNs
ServerQueue::start_service(const Packet& p, TimeNs now, const EventSink& emit)
{
  m_in_service = p;
  emit(PacketEvent{now, EventKind::ServiceStart, p.id, p.flow, p.size});
  return now + m_service.duration(p);
}

ServerQueue::EnqueueResult
ServerQueue::enqueue(const Packet& packet, TimeNs now, const EventSink& emit)
{
  if (!m_in_service) {
    return {Admission::Accepted, start_service(packet, now, emit)};
  }
  std::size_t limit = m_capacity ? *m_capacity + (m_off_by_one ? 1u : 0u) : SIZE_MAX;
  if (m_buffer.size() < limit) {
    m_buffer.push_back(packet);
    return {Admission::Accepted, std::nullopt};
  }
  emit(PacketEvent{now, EventKind::Drop, packet.id, packet.flow, packet.size});
  return {Admission::Dropped, std::nullopt};
}

ServerQueue::CompletionResult
ServerQueue::complete_service(TimeNs now, const EventSink& emit)
{
  if (!m_in_service) {
    throw InternalStateError("complete_service called with an idle server");
  }
  Packet done = *m_in_service;
  m_in_service.reset();
  PacketEvent departure{now, EventKind::Departure, done.id, done.flow, done.size};
  emit(departure);

  std::optional<TimeNs> next;
  if (!m_buffer.empty()) {
    Packet head = m_buffer.front();
    m_buffer.pop_front();
    next = start_service(head, now, emit);
  }
  return {departure, done, next};
}

} // namespace floodgate
