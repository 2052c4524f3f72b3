#pragma once

#include "floodgate/scenario.hpp"

#include <cmath>
#include <cstdint>

namespace floodgate::testing {

inline SourceSpec
cbr(NodeId node, double rate, std::uint32_t size, double start, double end)
{
  SourceSpec s;
  s.kind = SourceKind::Cbr;
  s.flow = FlowKey{node, static_cast<Port>(5000 + node), 0, 9000, Protocol::Udp};
  s.rate_pps = rate;
  s.packet_size = size;
  s.start_s = start;
  s.end_s = end;
  return s;
}

inline SourceSpec
poisson(NodeId node, double rate, double end)
{
  SourceSpec s;
  s.kind = SourceKind::PoissonBackground;
  s.flow = FlowKey{node, static_cast<Port>(5000 + node), 0, 53, Protocol::Udp};
  s.rate_pps = rate;
  s.start_s = 0.0;
  s.end_s = end;
  return s;
}

/// One Poisson source into an exponential server.
inline ScenarioConfig
mm1(double lambda, double mu, std::optional<std::uint32_t> K, double horizon, std::uint64_t seed)
{
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.horizon_s = horizon;
  cfg.queue_mode = QueueMode::Markovian;
  cfg.service_rate = mu;
  cfg.buffer_K = K;
  cfg.window_s = horizon;
  cfg.sources = {poisson(1, lambda, horizon)};
  return cfg;
}

/// Blocking probability by direct summation of the truncated geometric
/// distribution over 0..S packets in system.
inline double
blocking_by_sum(double lambda, double mu, std::uint32_t S)
{
  double rho = lambda / mu;
  long double total = 0.0L;
  long double term = 1.0L;
  for (std::uint32_t n = 0; n <= S; ++n) {
    total += term;
    if (n < S) {
      term *= rho;
    }
  }
  return static_cast<double>(term / total);
}

} // namespace floodgate::testing
