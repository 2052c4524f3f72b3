#include "floodgate/engine.hpp"

#include "floodgate/errors.hpp"
#include "floodgate/queue.hpp"
#include "floodgate/traffic.hpp"

#include <queue>
#include <vector>

namespace floodgate {

namespace {

enum class Slot : std::uint8_t { Departure = 0, Arrival = 1 };

struct Scheduled
{
  TimeNs time;
  Slot slot;
  std::uint64_t seq;
  std::uint32_t source; // Arrival only

  bool
  operator>(const Scheduled& o) const noexcept
  {
    if (time != o.time) {
      return time > o.time;
    }
    if (slot != o.slot) {
      return slot > o.slot;
    }
    return seq > o.seq;
  }
};

// Stream indices: 0 is the service stream, sources use 1 + position.
constexpr std::uint64_t kServiceStream = 0;

class Simulation
{
public:
  Simulation(const ScenarioConfig& cfg, const EventSink& sink, SimOptions options)
    : m_sink(sink)
    , m_horizon(seconds_to_ns(cfg.horizon_s))
    , m_queue(cfg.buffer_K, make_service(cfg))
  {
    m_queue.inject_off_by_one(options.off_by_one_buffer);
    auto specs = all_sources(cfg);
    m_sources.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
      m_sources.emplace_back(specs[i], RandomStream::derive(cfg.seed, i + 1));
    }
  }

  void
  run()
  {
    for (std::uint32_t i = 0; i < m_sources.size(); ++i) {
      if (auto t = m_sources[i].first_arrival()) {
        schedule(*t, Slot::Arrival, i);
      }
    }
    while (!m_pending.empty() && m_pending.top().time < m_horizon) {
      Scheduled ev = m_pending.top();
      m_pending.pop();
      if (ev.time < m_now) {
        throw InternalStateError("event scheduled in the past");
      }
      m_now = ev.time;
      if (ev.slot == Slot::Departure) {
        on_departure();
      }
      else {
        on_arrival(ev.source);
      }
    }
  }

private:
  static ServiceModel
  make_service(const ScenarioConfig& cfg)
  {
    if (cfg.queue_mode == QueueMode::Markovian) {
      return ServiceModel::markovian(cfg.service_rate, RandomStream::derive(cfg.seed, kServiceStream));
    }
    return ServiceModel::deterministic(cfg.link_capacity_Bps);
  }

  void
  schedule(TimeNs t, Slot slot, std::uint32_t source = 0)
  {
    m_pending.push(Scheduled{t, slot, m_seq++, source});
  }

  void
  feedback(const PacketEvent& ev, std::uint32_t source)
  {
    m_sources[source].ack_feedback(ev);
  }

  void
  on_arrival(std::uint32_t index)
  {
    TrafficSource& src = m_sources[index];
    std::uint32_t n = src.packets_due();
    src.on_sent(n);
    for (std::uint32_t k = 0; k < n; ++k) {
      Packet p{m_next_id++, src.spec().flow, src.spec().packet_size, m_now, index};
      m_sink(PacketEvent{m_now, EventKind::Arrival, p.id, p.flow, p.size});
      bool dropped = false;
      auto result = m_queue.enqueue(p, m_now, [&](const PacketEvent& ev) {
        m_sink(ev);
        dropped = ev.kind == EventKind::Drop;
      });
      if (result.departure_at) {
        schedule(*result.departure_at, Slot::Departure);
      }
      if (dropped) {
        feedback(PacketEvent{m_now, EventKind::Drop, p.id, p.flow, p.size}, index);
      }
    }
    if (auto t = src.next_arrival(m_now)) {
      schedule(*t, Slot::Arrival, index);
    }
  }

  void
  on_departure()
  {
    auto done = m_queue.complete_service(m_now, m_sink);
    feedback(done.departure, done.packet.source);
    if (done.next_departure_at) {
      schedule(*done.next_departure_at, Slot::Departure);
    }
  }

  const EventSink& m_sink;
  TimeNs m_horizon;
  TimeNs m_now = 0;
  ServerQueue m_queue;
  std::vector<TrafficSource> m_sources;
  std::priority_queue<Scheduled, std::vector<Scheduled>, std::greater<>> m_pending;
  std::uint64_t m_seq = 0;
  PacketId m_next_id = 1;
};

} // namespace

void
run(const ScenarioConfig& scenario, const EventSink& sink, SimOptions options)
{
  validate(scenario);
  Simulation sim(scenario, sink, options);
  sim.run();
}

EventTrace
run(const ScenarioConfig& scenario, SimOptions options)
{
  EventTrace trace;
  trace.horizon = seconds_to_ns(scenario.horizon_s);
  run(scenario, [&](const PacketEvent& ev) { trace.events.push_back(ev); }, options);
  return trace;
}

} // namespace floodgate
