#include "floodgate/engine.hpp"
#include "floodgate/errors.hpp"
#include "floodgate/properties.hpp"
#include "floodgate/rng.hpp"
#include "floodgate/traffic.hpp"

#include "support.hpp"

#include <doctest.h>

#include <map>

using namespace floodgate;
using namespace floodgate::testing;

namespace {

// One CBR flow at 1 packet/s into a 500 B/s link.
ScenarioConfig
dd1(std::uint32_t size, double horizon)
{
  ScenarioConfig cfg;
  cfg.horizon_s = horizon;
  cfg.link_capacity_Bps = 500.0;
  cfg.queue_mode = QueueMode::Deterministic;
  cfg.window_s = 1.0;
  cfg.sources = {cbr(1, 1.0, size, 0.0, horizon)};
  return cfg;
}

} // namespace

TEST_CASE("departure dispatches before a simultaneous arrival")
{
  // Service takes exactly one interarrival time, so every departure
  // coincides with the next arrival.
  auto trace = run(dd1(500, 3.0));
  std::vector<std::pair<TimeNs, EventKind>> got;
  for (const auto& ev : trace.events) {
    got.emplace_back(ev.time, ev.kind);
  }
  const TimeNs s = kNsPerSecond;
  std::vector<std::pair<TimeNs, EventKind>> want = {
    {0, EventKind::Arrival},         {0, EventKind::ServiceStart},
    {s, EventKind::Departure},       {s, EventKind::Arrival},
    {s, EventKind::ServiceStart},    {2 * s, EventKind::Departure},
    {2 * s, EventKind::Arrival},     {2 * s, EventKind::ServiceStart},
  };
  CHECK(got == want);
  // Nothing ever waited.
  for (const auto& ev : trace.events) {
    if (ev.kind == EventKind::ServiceStart) {
      CHECK(ev.time % s == 0);
    }
  }
}

TEST_CASE("events at the horizon are not dispatched")
{
  auto trace = run(dd1(250, 2.0));
  CHECK(trace.horizon == 2 * kNsPerSecond);
  for (const auto& ev : trace.events) {
    CHECK(ev.time < trace.horizon);
  }
}

TEST_CASE("same seed gives the same trace")
{
  auto cfg = build_default_scenario();
  cfg.horizon_s = 30.0;
  cfg.attack.floods.resize(1);
  auto a = run(cfg);
  auto b = run(cfg);
  REQUIRE(a.events.size() == b.events.size());
  CHECK(std::equal(a.events.begin(), a.events.end(), b.events.begin()));
  cfg.seed = 2;
  auto c = run(cfg);
  CHECK_FALSE((c.events.size() == a.events.size() &&
               std::equal(a.events.begin(), a.events.end(), c.events.begin())));
}

TEST_CASE("invalid scenario is refused before running")
{
  auto cfg = dd1(500, 3.0);
  cfg.horizon_s = -1.0;
  cfg.sources[0].rate_pps = 0.0;
  try {
    run(cfg);
    FAIL("expected ConfigError");
  }
  catch (const ConfigError& e) {
    CHECK(e.diagnostics().size() >= 2);
  }
}

TEST_CASE("unbounded buffer never drops")
{
  auto trace = run(mm1(9.0, 10.0, std::nullopt, 200.0, 3));
  for (const auto& ev : trace.events) {
    REQUIRE(ev.kind != EventKind::Drop);
  }
}

TEST_CASE("FTP window halves on a drop and grows on departures")
{
  // A single FTP flow behind a saturating CBR flow with a tiny buffer.
  ScenarioConfig cfg;
  cfg.horizon_s = 20.0;
  cfg.link_capacity_Bps = 100'000.0;
  cfg.buffer_K = 2;
  SourceSpec ftp;
  ftp.kind = SourceKind::Ftp;
  ftp.flow = FlowKey{3, 40001, 0, 20, Protocol::Tcp};
  ftp.window = 1.0;
  ftp.window_cap = 8.0;
  ftp.round_trip_s = 0.05;
  ftp.packet_size = 500;
  ftp.start_s = 0.0;
  ftp.end_s = 20.0;
  cfg.sources = {cbr(1, 150.0, 500, 0.0, 20.0), ftp};
  auto trace = run(cfg);
  std::uint64_t ftp_drops = 0;
  std::uint64_t ftp_departures = 0;
  for (const auto& ev : trace.events) {
    if (ev.flow == ftp.flow) {
      ftp_drops += ev.kind == EventKind::Drop;
      ftp_departures += ev.kind == EventKind::Departure;
    }
  }
  CHECK(ftp_departures > 0);
  CHECK(ftp_drops > 0);
}

TEST_CASE("property suite holds on random scenarios")
{
  // Random mixes of CBR and Poisson flows, buffer sizes and service modes.
  RandomStream gen(2024);
  for (int trial = 0; trial < 25; ++trial) {
    ScenarioConfig cfg;
    cfg.seed = gen.next_raw() % 1000 + 1;
    cfg.horizon_s = 5.0 + 10.0 * gen.uniform();
    cfg.window_s = 0.5 + gen.uniform();
    bool markovian = gen.uniform() < 0.5;
    cfg.queue_mode = markovian ? QueueMode::Markovian : QueueMode::Deterministic;
    cfg.service_rate = 50.0 + 200.0 * gen.uniform();
    cfg.link_capacity_Bps = 20'000.0 + 100'000.0 * gen.uniform();
    if (gen.uniform() < 0.2) {
      cfg.buffer_K = std::nullopt;
    }
    else {
      cfg.buffer_K = static_cast<std::uint32_t>(gen.next_raw() % 20);
    }
    int n = 1 + static_cast<int>(gen.next_raw() % 4);
    for (int i = 0; i < n; ++i) {
      auto node = static_cast<NodeId>(i + 1);
      double rate = 10.0 + 150.0 * gen.uniform();
      if (gen.uniform() < 0.5) {
        double start = cfg.horizon_s * 0.3 * gen.uniform();
        cfg.sources.push_back(cbr(node, rate, 100 + static_cast<std::uint32_t>(gen.next_raw() % 900),
                                  start, cfg.horizon_s));
      }
      else {
        cfg.sources.push_back(poisson(node, rate, cfg.horizon_s));
      }
    }
    CAPTURE(trial);
    for (const auto& r : check_all_properties(cfg)) {
      CAPTURE(r.name);
      CAPTURE(r.detail);
      CHECK(r.passed);
    }
  }
}

TEST_CASE("off-by-one buffer is caught by the buffer bound")
{
  auto cfg = mm1(30.0, 10.0, 3, 50.0, 1);
  auto trace = run(cfg, SimOptions{true});
  CHECK_FALSE(check_buffer_bound(trace, cfg.buffer_K).passed);
  CHECK(check_buffer_bound(run(cfg), cfg.buffer_K).passed);
}

TEST_CASE("conservation and FCFS reject tampered traces")
{
  auto trace = run(mm1(8.0, 10.0, 5, 50.0, 4));
  REQUIRE(check_conservation(trace).passed);
  REQUIRE(check_fcfs(trace).passed);

  auto swapped = trace;
  std::vector<std::size_t> deps;
  for (std::size_t i = 0; i < swapped.events.size(); ++i) {
    if (swapped.events[i].kind == EventKind::Departure) {
      deps.push_back(i);
    }
  }
  REQUIRE(deps.size() >= 2);
  std::swap(swapped.events[deps[0]].packet_id, swapped.events[deps[1]].packet_id);
  CHECK_FALSE(check_fcfs(swapped).passed);

  auto doubled = trace;
  doubled.events.push_back(doubled.events[deps[0]]);
  doubled.events.back().time = doubled.events[doubled.events.size() - 2].time;
  CHECK_FALSE(check_conservation(doubled).passed);
}

TEST_CASE("zero horizon gives an empty trace")
{
  auto cfg = dd1(500, 3.0);
  cfg.horizon_s = 0.0;
  auto trace = run(cfg);
  CHECK(trace.events.empty());
  CHECK(trace.horizon == 0);
}
