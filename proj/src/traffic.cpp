#include "floodgate/traffic.hpp"

#include <algorithm>
#include <cmath>

namespace floodgate {

TrafficSource::TrafficSource(SourceSpec spec, RandomStream rng)
  : m_spec(std::move(spec))
  , m_rng(rng)
  , m_start(seconds_to_ns(m_spec.start_s))
  , m_end(seconds_to_ns(m_spec.end_s))
  , m_window(m_spec.window)
{
  if (m_spec.kind == SourceKind::Cbr) {
    m_cbr_interval = std::max<TimeNs>(1, std::llround(1e9 / m_spec.rate_pps));
  }
}

std::optional<TimeNs>
TrafficSource::bounded(TimeNs t) const noexcept
{
  if (t >= m_end) {
    return std::nullopt;
  }
  return t;
}

TimeNs
TrafficSource::random_gap(double rate)
{
  return seconds_to_ns(sample_exponential(rate, m_rng));
}

std::optional<TimeNs>
TrafficSource::first_arrival()
{
  switch (m_spec.kind) {
  case SourceKind::Cbr:
  case SourceKind::Ftp:
    return bounded(m_start);
  case SourceKind::PoissonBackground:
    return bounded(m_start + random_gap(m_spec.rate_pps));
  case SourceKind::Flood:
    return bounded(m_start + random_gap(m_spec.rate_pps / m_spec.burst));
  }
  return std::nullopt;
}

std::optional<TimeNs>
TrafficSource::next_arrival(TimeNs now)
{
  if (now < m_start) {
    return first_arrival();
  }
  switch (m_spec.kind) {
  case SourceKind::Cbr:
    return bounded(now + m_cbr_interval);
  case SourceKind::Ftp:
    return bounded(now + std::max<TimeNs>(1, seconds_to_ns(m_spec.round_trip_s)));
  case SourceKind::PoissonBackground:
    return bounded(now + random_gap(m_spec.rate_pps));
  case SourceKind::Flood:
    return bounded(now + random_gap(m_spec.rate_pps / m_spec.burst));
  }
  return std::nullopt;
}

std::uint32_t
TrafficSource::packets_due() const noexcept
{
  switch (m_spec.kind) {
  case SourceKind::Cbr:
  case SourceKind::PoissonBackground:
    return 1;
  case SourceKind::Flood:
    return m_spec.burst;
  case SourceKind::Ftp: {
    auto allowed = static_cast<std::uint32_t>(std::floor(m_window));
    return allowed > m_unacked ? allowed - m_unacked : 0;
  }
  }
  return 0;
}

void
TrafficSource::on_sent(std::uint32_t n) noexcept
{
  if (m_spec.kind == SourceKind::Ftp) {
    m_unacked += n;
  }
}

void
TrafficSource::ack_feedback(const PacketEvent& event) noexcept
{
  if (m_spec.kind != SourceKind::Ftp || event.flow != m_spec.flow) {
    return;
  }
  switch (event.kind) {
  case EventKind::Departure:
    if (m_unacked > 0) {
      --m_unacked;
    }
    m_window = std::min(m_spec.window_cap, m_window + 1.0 / m_window);
    break;
  case EventKind::Drop:
    if (m_unacked > 0) {
      --m_unacked;
    }
    m_window = std::max(1.0, m_window / 2.0);
    break;
  default:
    break;
  }
}

ScenarioConfig
build_default_scenario()
{
  constexpr NodeId server = 0;
  constexpr NodeId attacker = 99;
  constexpr double horizon = 100.0;

  ScenarioConfig cfg;
  cfg.seed = 1;
  cfg.horizon_s = horizon;
  cfg.link_capacity_Bps = 1'250'000.0; // 10 Mb/s
  cfg.queue_mode = QueueMode::Deterministic;
  cfg.buffer_K = 50;
  cfg.window_s = 1.0;

  auto legit = [&](SourceKind kind, NodeId node, Port sport, Port dport, Protocol proto) {
    SourceSpec s;
    s.kind = kind;
    s.flow = FlowKey{node, sport, server, dport, proto};
    s.packet_size = 512;
    s.start_s = 0.0;
    s.end_s = horizon;
    return s;
  };

  SourceSpec cbr1 = legit(SourceKind::Cbr, 1, 5001, 9001, Protocol::Udp);
  cbr1.rate_pps = 100.0;
  SourceSpec cbr2 = legit(SourceKind::Cbr, 2, 5002, 9002, Protocol::Udp);
  cbr2.rate_pps = 80.0;

  SourceSpec ftp1 = legit(SourceKind::Ftp, 3, 40001, 20, Protocol::Tcp);
  ftp1.window = 1.0;
  ftp1.window_cap = 8.0;
  ftp1.round_trip_s = 0.08;
  SourceSpec ftp2 = legit(SourceKind::Ftp, 4, 40002, 20, Protocol::Tcp);
  ftp2.window = 1.0;
  ftp2.window_cap = 8.0;
  ftp2.round_trip_s = 0.12;

  SourceSpec background = legit(SourceKind::PoissonBackground, 5, 33000, 53, Protocol::Udp);
  background.rate_pps = 60.0;

  cfg.sources = {cbr1, cbr2, ftp1, ftp2, background};

  const std::pair<Port, double> floods[] = {{21, 20.0}, {5060, 45.0}, {1580, 70.0}};
  Port attacker_port = 6000;
  for (auto [port, start] : floods) {
    SourceSpec f;
    f.kind = SourceKind::Flood;
    f.flow = FlowKey{attacker, attacker_port++, server, port, Protocol::Udp};
    f.rate_pps = kDefaultFloodRatePps;
    f.burst = 32;
    f.packet_size = 1024;
    f.start_s = start;
    f.end_s = start + 10.0;
    cfg.attack.floods.push_back(f);
  }
  return cfg;
}

} // namespace floodgate
