#include "floodgate/analytics.hpp"

#include "floodgate/errors.hpp"

#include <cmath>
#include <string>

namespace floodgate {

void
LittleAccumulator::advance(TimeNs t)
{
  if (t < m_last) {
    throw OrderingError("event at " + std::to_string(t) + " ns precedes " + std::to_string(m_last) + " ns");
  }
  auto dt = static_cast<long double>(t - m_last);
  m_system_integral += static_cast<long double>(m_in_system) * dt;
  m_queue_integral += static_cast<long double>(m_waiting) * dt;
  m_last = t;
}

void
LittleAccumulator::ingest(const PacketEvent& event)
{
  advance(event.time);
  auto id = std::to_string(event.packet_id);
  auto it = m_open.find(event.packet_id);
  switch (event.kind) {
  case EventKind::Arrival:
    if (it != m_open.end()) {
      throw IntegrityError("packet " + id + " arrived twice");
    }
    m_open.emplace(event.packet_id, Lifecycle{event.time, std::nullopt});
    ++m_counts.arrivals;
    ++m_in_system;
    ++m_waiting;
    break;
  case EventKind::ServiceStart:
    if (it == m_open.end() || it->second.service_start) {
      throw IntegrityError("service start for packet " + id + " without a pending arrival");
    }
    it->second.service_start = event.time;
    --m_waiting;
    break;
  case EventKind::Departure:
    if (it == m_open.end() || !it->second.service_start) {
      throw IntegrityError("departure for packet " + id + " that was never in service");
    }
    m_sojourn_sum += static_cast<long double>(event.time - it->second.arrival);
    m_wait_sum += static_cast<long double>(*it->second.service_start - it->second.arrival);
    ++m_counts.departures;
    --m_in_system;
    m_open.erase(it);
    break;
  case EventKind::Drop:
    if (it == m_open.end() || it->second.service_start) {
      throw IntegrityError("drop for packet " + id + " that is not waiting to be admitted");
    }
    ++m_counts.drops;
    --m_in_system;
    --m_waiting;
    m_open.erase(it);
    break;
  }
}

LittleReport
LittleAccumulator::finish(TimeNs horizon)
{
  advance(std::max(horizon, m_last));
  LittleReport r = m_counts;
  r.admitted = r.arrivals - r.drops;
  if (horizon > 0) {
    double h = ns_to_seconds(horizon);
    auto ns_integral_to_mean = [&](long double integral) {
      return static_cast<double>(integral / static_cast<long double>(horizon));
    };
    r.lambda_offered = static_cast<double>(r.arrivals) / h;
    r.lambda_measured = static_cast<double>(r.admitted) / h;
    r.N_measured = ns_integral_to_mean(m_system_integral);
    r.Nq_measured = ns_integral_to_mean(m_queue_integral);
  }
  if (r.departures > 0) {
    auto n = static_cast<long double>(r.departures);
    r.W_measured = static_cast<double>(m_sojourn_sum / n / 1e9L);
    r.Wq_measured = static_cast<double>(m_wait_sum / n / 1e9L);
  }
  r.residual_N = std::abs(r.N_measured - r.lambda_measured * r.W_measured) /
                 std::max(r.N_measured, kResidualEpsilon);
  r.residual_Nq = std::abs(r.Nq_measured - r.lambda_measured * r.Wq_measured) /
                  std::max(r.Nq_measured, kResidualEpsilon);
  return r;
}

LittleReport
little_law_check(const EventTrace& trace)
{
  LittleAccumulator acc;
  for (const auto& ev : trace.events) {
    acc.ingest(ev);
  }
  return acc.finish(trace.horizon);
}

Mm1Metrics
mm1_mean_metrics(double lambda, double mu)
{
  if (!(lambda >= 0.0) || !(mu > 0.0) || !std::isfinite(lambda) || !std::isfinite(mu)) {
    throw InvalidParameter("M/M/1 needs lambda >= 0 and mu > 0");
  }
  if (lambda >= mu) {
    throw UnstableSystem("M/M/1 with lambda " + std::to_string(lambda) + " >= mu " + std::to_string(mu) +
                         " has no steady state");
  }
  Mm1Metrics m;
  m.rho = lambda / mu;
  m.N = m.rho / (1.0 - m.rho);
  m.W = 1.0 / (mu - lambda);
  m.Nq = m.rho * m.rho / (1.0 - m.rho);
  m.Wq = m.rho / (mu - lambda);
  return m;
}

double
mm1k_blocking(double lambda, double mu, std::uint32_t buffer_slots)
{
  if (!(lambda >= 0.0) || !(mu > 0.0) || !std::isfinite(lambda) || !std::isfinite(mu)) {
    throw InvalidParameter("M/M/1/K needs lambda >= 0 and mu > 0");
  }
  if (lambda == 0.0) {
    return 0.0;
  }
  const double S = static_cast<double>(buffer_slots) + 1.0;
  const double rho = lambda / mu;
  if (rho == 1.0) {
    return 1.0 / (S + 1.0);
  }
  if (rho < 1.0) {
    double log_rho = std::log(rho);
    return (1.0 - rho) * std::exp(S * log_rho) / -std::expm1((S + 1.0) * log_rho);
  }
  // Divide through by rho^(S+1) to stay finite for large S.
  double r = 1.0 / rho;
  return (1.0 - r) / -std::expm1((S + 1.0) * std::log(r));
}

std::string_view
to_string(TrafficClass c) noexcept
{
  return c == TrafficClass::Cbr ? "CBR" : "FTP";
}

const LossRow*
LossTable::find(TrafficClass c, std::size_t flood_index) const
{
  for (const auto& row : rows) {
    if (row.traffic_class == c && row.flood_index == flood_index) {
      return &row;
    }
  }
  return nullptr;
}

LossAccumulator::LossAccumulator(const ScenarioConfig& scenario)
{
  for (const auto& s : scenario.sources) {
    if (s.kind == SourceKind::Cbr) {
      m_classes.emplace(s.flow, TrafficClass::Cbr);
    }
    else if (s.kind == SourceKind::Ftp) {
      m_classes.emplace(s.flow, TrafficClass::Ftp);
    }
  }
  for (const auto& f : scenario.attack.floods) {
    m_floods.emplace_back(seconds_to_ns(f.start_s), seconds_to_ns(f.end_s));
  }
  m_counts[0].resize(m_floods.size() + 1);
  m_counts[1].resize(m_floods.size() + 1);
}

void
LossAccumulator::ingest(const PacketEvent& ev)
{
  if (ev.kind == EventKind::Arrival) {
    auto c = m_classes.find(ev.flow);
    if (c == m_classes.end()) {
      return;
    }
    std::size_t slot = 0;
    for (std::size_t i = 0; i < m_floods.size(); ++i) {
      if (ev.time >= m_floods[i].first && ev.time < m_floods[i].second) {
        slot = i + 1;
        break;
      }
    }
    ++m_counts[static_cast<int>(c->second)][slot].arrivals;
    m_open.emplace(ev.packet_id, Tag{c->second, slot});
  }
  else if (ev.kind == EventKind::Drop || ev.kind == EventKind::Departure) {
    auto it = m_open.find(ev.packet_id);
    if (it == m_open.end()) {
      return;
    }
    if (ev.kind == EventKind::Drop) {
      ++m_counts[static_cast<int>(it->second.cls)][it->second.slot].drops;
    }
    m_open.erase(it);
  }
}

LossTable
LossAccumulator::finish() const
{
  auto percent = [](const Tally& t) {
    return t.arrivals == 0 ? 0.0 : 100.0 * static_cast<double>(t.drops) / static_cast<double>(t.arrivals);
  };
  LossTable table;
  for (TrafficClass cls : {TrafficClass::Cbr, TrafficClass::Ftp}) {
    const auto& tallies = m_counts[static_cast<int>(cls)];
    for (std::size_t i = 1; i < tallies.size(); ++i) {
      if (tallies[i].arrivals == 0) {
        table.notes.push_back(std::string(to_string(cls)) + " has no arrivals during flood " + std::to_string(i));
        continue;
      }
      table.rows.push_back(LossRow{cls, i, tallies[i].arrivals, tallies[i].drops, percent(tallies[i])});
    }
    if (tallies[0].arrivals > 0) {
      ClassLoss base{tallies[0].arrivals, tallies[0].drops, percent(tallies[0])};
      (cls == TrafficClass::Cbr ? table.baseline_cbr : table.baseline_ftp) = base;
    }
  }
  return table;
}

LossTable
loss_by_class(const EventTrace& trace, const ScenarioConfig& scenario)
{
  LossAccumulator acc(scenario);
  for (const auto& ev : trace.events) {
    acc.ingest(ev);
  }
  return acc.finish();
}

} // namespace floodgate
