#include "floodgate/properties.hpp"

#include "floodgate/engine.hpp"

#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace floodgate {

PropertyResult
check_conservation(const EventTrace& trace)
{
  std::uint64_t arrivals = 0, departures = 0, drops = 0;
  std::unordered_set<PacketId> open;
  for (const auto& ev : trace.events) {
    switch (ev.kind) {
    case EventKind::Arrival:
      ++arrivals;
      open.insert(ev.packet_id);
      break;
    case EventKind::Departure:
      ++departures;
      open.erase(ev.packet_id);
      break;
    case EventKind::Drop:
      ++drops;
      open.erase(ev.packet_id);
      break;
    case EventKind::ServiceStart:
      break;
    }
  }
  bool ok = arrivals == departures + drops + open.size();
  return {"conservation", ok,
          std::to_string(arrivals) + " arrivals = " + std::to_string(departures) + " departures + " +
            std::to_string(drops) + " drops + " + std::to_string(open.size()) + " in system"};
}

PropertyResult
check_fcfs(const EventTrace& trace)
{
  std::unordered_set<PacketId> departed;
  for (const auto& ev : trace.events) {
    if (ev.kind == EventKind::Departure) {
      departed.insert(ev.packet_id);
    }
  }
  std::vector<PacketId> arrival_order;
  std::vector<PacketId> departure_order;
  for (const auto& ev : trace.events) {
    if (ev.kind == EventKind::Arrival && departed.count(ev.packet_id)) {
      arrival_order.push_back(ev.packet_id);
    }
    else if (ev.kind == EventKind::Departure) {
      departure_order.push_back(ev.packet_id);
    }
  }
  bool ok = arrival_order == departure_order;
  return {"fcfs", ok, std::to_string(departure_order.size()) + " served packets checked"};
}

PropertyResult
check_buffer_bound(const EventTrace& trace, std::optional<std::uint32_t> buffer_K)
{
  if (!buffer_K) {
    return {"buffer_bound", true, "unbounded buffer"};
  }
  const std::int64_t limit = static_cast<std::int64_t>(*buffer_K) + 1;
  std::int64_t in_system = 0;
  std::int64_t worst = 0;
  const auto& evs = trace.events;
  for (std::size_t i = 0; i < evs.size(); ++i) {
    switch (evs[i].kind) {
    case EventKind::Arrival:
      ++in_system;
      break;
    case EventKind::Departure:
    case EventKind::Drop:
      --in_system;
      break;
    case EventKind::ServiceStart:
      break;
    }
    bool last_at_time = i + 1 == evs.size() || evs[i + 1].time != evs[i].time;
    if (last_at_time) {
      worst = std::max(worst, in_system);
    }
  }
  return {"buffer_bound", worst <= limit,
          "max in system " + std::to_string(worst) + ", limit K+1 = " + std::to_string(limit)};
}

PropertyResult
check_cbr_spacing(const EventTrace& trace, const ScenarioConfig& scenario)
{
  std::unordered_map<FlowKey, TimeNs, FlowKeyHash> expected;
  for (const auto& s : scenario.sources) {
    if (s.kind == SourceKind::Cbr) {
      expected.emplace(s.flow, std::max<TimeNs>(1, std::llround(1e9 / s.rate_pps)));
    }
  }
  std::unordered_map<FlowKey, TimeNs, FlowKeyHash> last;
  std::uint64_t gaps = 0;
  for (const auto& ev : trace.events) {
    if (ev.kind != EventKind::Arrival) {
      continue;
    }
    auto want = expected.find(ev.flow);
    if (want == expected.end()) {
      continue;
    }
    auto [it, fresh] = last.try_emplace(ev.flow, ev.time);
    if (!fresh) {
      if (ev.time - it->second != want->second) {
        return {"cbr_spacing", false,
                "gap of " + std::to_string(ev.time - it->second) + " ns, expected " + std::to_string(want->second)};
      }
      it->second = ev.time;
      ++gaps;
    }
  }
  return {"cbr_spacing", true, std::to_string(gaps) + " gaps exact"};
}

PropertyResult
check_signal_monotonicity(const std::vector<MetricsWindow>& windows,
                          const DetectorConfig& cfg,
                          std::optional<std::uint32_t> buffer_K)
{
  const double steps[] = {0.05, 0.25, 0.5, 0.75, 0.85, 0.95, 1.0};
  std::uint64_t pairs = 0;
  for (double u_lo : steps) {
    for (double r_lo : steps) {
      DetectorConfig lo = cfg;
      lo.util_threshold = u_lo;
      lo.drop_arrival_ratio_threshold = r_lo;
      auto base = signal_series(windows, lo, buffer_K);
      for (double u_hi : steps) {
        for (double r_hi : steps) {
          if (u_hi < u_lo || r_hi < r_lo) {
            continue;
          }
          DetectorConfig hi = lo;
          hi.util_threshold = u_hi;
          hi.drop_arrival_ratio_threshold = r_hi;
          auto raised = signal_series(windows, hi, buffer_K);
          for (std::size_t i = 0; i < windows.size(); ++i) {
            if (raised[i].value > base[i].value) {
              return {"signal_monotonicity", false, "window " + std::to_string(i) + " rose to 1"};
            }
          }
          ++pairs;
        }
      }
    }
  }
  return {"signal_monotonicity", true, std::to_string(pairs) + " threshold pairs checked"};
}

PropertyResult
check_ewma_silence(const DetectorConfig& cfg)
{
  for (double c : {0.0, 1.0, 37.5, 1e6}) {
    EwmaState s;
    for (int i = 0; i < 500; ++i) {
      auto r = ewma_update(s, c, cfg.ewma_alpha, cfg.ewma_k, 1.0);
      if (r.abrupt) {
        return {"ewma_silence", false, "fired on constant input " + std::to_string(c)};
      }
      s = r.state;
    }
  }
  return {"ewma_silence", true, "constant streams stay silent"};
}

std::vector<PropertyResult>
check_all_properties(const ScenarioConfig& scenario, SimOptions options)
{
  auto trace = run(scenario, options);
  auto windows = series(trace, scenario.window_s);
  return {check_conservation(trace),
          check_fcfs(trace),
          check_buffer_bound(trace, scenario.buffer_K),
          check_cbr_spacing(trace, scenario),
          check_signal_monotonicity(windows, scenario.detector, scenario.buffer_K),
          check_ewma_silence(scenario.detector)};
}

} // namespace floodgate
