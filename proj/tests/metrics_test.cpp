#include "floodgate/engine.hpp"
#include "floodgate/errors.hpp"
#include "floodgate/metrics.hpp"
#include "floodgate/traffic.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace floodgate;
using namespace floodgate::testing;

namespace {

const FlowKey kA{1, 5001, 0, 80, Protocol::Udp};
const FlowKey kB{2, 5002, 0, 80, Protocol::Udp};

TimeNs
ms(int v)
{
  return static_cast<TimeNs>(v) * 1'000'000;
}

PacketEvent
ev(TimeNs t, EventKind k, PacketId id, FlowKey f = kA, std::uint32_t size = 512)
{
  return PacketEvent{t, k, id, f, size};
}

} // namespace

TEST_CASE("single events update their counters")
{
  MetricsAccumulator acc(kNsPerSecond, kNsPerSecond);
  acc.ingest(ev(0, EventKind::Arrival, 1));
  acc.ingest(ev(0, EventKind::ServiceStart, 1));
  acc.ingest(ev(ms(100), EventKind::Arrival, 2));
  acc.ingest(ev(ms(100), EventKind::Drop, 2));
  acc.ingest(ev(ms(400), EventKind::Departure, 1));
  auto w = acc.finish();
  REQUIRE(w.size() == 1);
  CHECK(w[0].p_arrivals == 2);
  CHECK(w[0].bytes_arrived == 1024);
  CHECK(w[0].p_drops == 1);
  CHECK(w[0].p_departures == 1);
  CHECK(w[0].bytes_transmitted == 512);
  CHECK(w[0].bandwidth_utilization == doctest::Approx(0.4));
  CHECK(w[0].flow_count == 1);
  CHECK(w[0].avg_packet_size == doctest::Approx(512.0));
  CHECK(w[0].max_buffer_occupancy == 0);
}

TEST_CASE("straddling transmission splits between windows")
{
  // K = 1. p1 served 0.5 to 1.5, p2 waits 0.6 to 1.5 and departs 1.8,
  // p3 is dropped at 0.7.
  MetricsAccumulator acc(kNsPerSecond, 2 * kNsPerSecond);
  acc.ingest(ev(ms(500), EventKind::Arrival, 1));
  acc.ingest(ev(ms(500), EventKind::ServiceStart, 1));
  acc.ingest(ev(ms(600), EventKind::Arrival, 2, kB, 100));
  acc.ingest(ev(ms(700), EventKind::Arrival, 3));
  acc.ingest(ev(ms(700), EventKind::Drop, 3));
  acc.ingest(ev(ms(1500), EventKind::Departure, 1));
  acc.ingest(ev(ms(1500), EventKind::ServiceStart, 2, kB, 100));
  acc.ingest(ev(ms(1800), EventKind::Departure, 2, kB, 100));
  auto w = acc.finish();
  REQUIRE(w.size() == 2);

  CHECK(w[0].window_start == 0.0);
  CHECK(w[0].window_end == 1.0);
  CHECK(w[0].p_arrivals == 3);
  CHECK(w[0].p_drops == 1);
  CHECK(w[0].p_departures == 0);
  CHECK(w[0].flow_count == 2);
  CHECK(w[0].avg_packet_size == doctest::Approx(1124.0 / 3.0));
  CHECK(w[0].bandwidth_utilization == doctest::Approx(0.5));
  CHECK(w[0].max_buffer_occupancy == 1);
  CHECK(w[0].mean_queue_length == doctest::Approx(0.4));
  CHECK(w[0].mean_wait == 0.0);

  CHECK(w[1].p_arrivals == 0);
  CHECK(w[1].p_departures == 2);
  CHECK(w[1].bytes_transmitted == 612);
  CHECK(w[1].bandwidth_utilization == doctest::Approx(0.8));
  CHECK(w[1].max_buffer_occupancy == 1);
  CHECK(w[1].mean_queue_length == doctest::Approx(0.5));
  CHECK(w[1].mean_wait == doctest::Approx(0.45));
  CHECK(acc.queue_length() == 0);
}

TEST_CASE("empty windows are all zero")
{
  EventTrace trace;
  trace.horizon = 3 * kNsPerSecond;
  auto w = series(trace, 1.0);
  REQUIRE(w.size() == 3);
  for (const auto& x : w) {
    CHECK(x.p_arrivals == 0);
    CHECK(x.p_drops == 0);
    CHECK(x.bandwidth_utilization == 0.0);
    CHECK(x.mean_queue_length == 0.0);
  }
}

TEST_CASE("short last window when the width does not divide the horizon")
{
  EventTrace trace;
  trace.horizon = ms(2500);
  auto w = series(trace, 1.0);
  REQUIRE(w.size() == 3);
  CHECK(w[2].window_start == 2.0);
  CHECK(w[2].window_end == 2.5);
}

TEST_CASE("window width must be positive")
{
  EventTrace trace;
  trace.horizon = kNsPerSecond;
  CHECK_THROWS_AS(series(trace, 0.0), ConfigError);
  CHECK_THROWS_AS(series(trace, -1.0), ConfigError);
}

TEST_CASE("out-of-order and unknown events are rejected")
{
  MetricsAccumulator acc(kNsPerSecond, 2 * kNsPerSecond);
  acc.ingest(ev(ms(500), EventKind::Arrival, 1));
  CHECK_THROWS_AS(acc.ingest(ev(ms(400), EventKind::Arrival, 2)), OrderingError);
  MetricsAccumulator acc2(kNsPerSecond, 2 * kNsPerSecond);
  CHECK_THROWS_AS(acc2.ingest(ev(ms(400), EventKind::Departure, 7)), IntegrityError);
  MetricsAccumulator acc3(kNsPerSecond, 2 * kNsPerSecond);
  CHECK_THROWS_AS(acc3.ingest(ev(2 * kNsPerSecond, EventKind::Arrival, 1)), OrderingError);
}

TEST_CASE("saturated link reports utilization near one")
{
  // Back-to-back 1000 B packets on a 10 kB/s link: 10 per second, queue
  // never empties.
  ScenarioConfig cfg;
  cfg.horizon_s = 5.0;
  cfg.link_capacity_Bps = 10'000.0;
  cfg.buffer_K = 5;
  cfg.sources = {cbr(1, 20.0, 1000, 0.0, 5.0)};
  auto w = series(run(cfg), 1.0);
  for (const auto& x : w) {
    CHECK(x.bandwidth_utilization <= 1.0);
    CHECK(x.bandwidth_utilization >= 1.0 - 1e-9);
  }
}

TEST_CASE("one window spanning the horizon equals the whole-trace aggregate")
{
  auto cfg = mm1(8.0, 10.0, 10, 200.0, 2);
  auto trace = run(cfg);
  auto one = series(trace, 200.0);
  REQUIRE(one.size() == 1);
  std::uint64_t arrivals = 0, drops = 0, departures = 0, bytes = 0;
  for (const auto& e : trace.events) {
    arrivals += e.kind == EventKind::Arrival;
    drops += e.kind == EventKind::Drop;
    departures += e.kind == EventKind::Departure;
    bytes += e.kind == EventKind::Departure ? e.size : 0;
  }
  CHECK(one[0].p_arrivals == arrivals);
  CHECK(one[0].p_drops == drops);
  CHECK(one[0].p_departures == departures);
  CHECK(one[0].bytes_transmitted == bytes);

  // Finer windows sum to the same counts.
  auto fine = series(trace, 7.0);
  std::uint64_t a2 = 0, d2 = 0;
  double busy = 0.0;
  for (const auto& w : fine) {
    a2 += w.p_arrivals;
    d2 += w.p_drops;
    busy += w.bandwidth_utilization * (w.window_end - w.window_start);
  }
  CHECK(a2 == arrivals);
  CHECK(d2 == drops);
  CHECK(busy == doctest::Approx(one[0].bandwidth_utilization * 200.0).epsilon(1e-9));
}

TEST_CASE("default scenario drops plateau during the floods")
{
  auto w = series(run(build_default_scenario()), 1.0);
  REQUIRE(w.size() == 100);
  for (const auto& x : w) {
    auto t = static_cast<int>(x.window_start);
    bool flood = (t >= 20 && t < 30) || (t >= 45 && t < 55) || (t >= 70 && t < 80);
    CAPTURE(t);
    if (flood) {
      CHECK(x.p_drops > 1000);
      CHECK(x.bandwidth_utilization >= 0.8);
    }
    else {
      CHECK(x.p_drops < 50);
    }
  }
}
