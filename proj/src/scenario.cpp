#include "floodgate/scenario.hpp"

#include "floodgate/errors.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace floodgate {

namespace {

bool
positive(double x)
{
  return x > 0.0 && std::isfinite(x);
}

void
check_source(const SourceSpec& s, const std::string& where, std::vector<std::string>& out)
{
  if (!(std::isfinite(s.start_s) && s.start_s >= 0.0)) {
    out.push_back(where + ".start_s: must be finite and >= 0");
  }
  if (!(std::isfinite(s.end_s) && s.start_s < s.end_s)) {
    out.push_back(where + ".end_s: must be finite and greater than start_s");
  }
  if (s.packet_size == 0) {
    out.push_back(where + ".packet_size: must be > 0");
  }
  switch (s.kind) {
  case SourceKind::Cbr:
  case SourceKind::PoissonBackground:
  case SourceKind::Flood:
    if (!positive(s.rate_pps)) {
      out.push_back(where + ".rate_pps: must be > 0");
    }
    break;
  case SourceKind::Ftp:
    if (!(s.window >= 1.0 && std::isfinite(s.window))) {
      out.push_back(where + ".window: must be >= 1");
    }
    if (!(s.window_cap >= s.window && std::isfinite(s.window_cap))) {
      out.push_back(where + ".window_cap: must be >= window");
    }
    if (!positive(s.round_trip_s)) {
      out.push_back(where + ".round_trip_s: must be > 0");
    }
    break;
  }
  if (s.kind == SourceKind::Flood) {
    if (s.burst == 0) {
      out.push_back(where + ".burst: must be >= 1");
    }
    if (s.flow.protocol != Protocol::Udp) {
      out.push_back(where + ".flow.protocol: floods are UDP");
    }
  }
  if (s.kind == SourceKind::Cbr && positive(s.rate_pps) &&
      std::llround(1e9 / s.rate_pps) < 1) {
    out.push_back(where + ".rate_pps: CBR interval rounds to 0 ns");
  }
}

} // namespace

std::string_view
to_string(SourceKind k) noexcept
{
  switch (k) {
  case SourceKind::PoissonBackground:
    return "poisson";
  case SourceKind::Cbr:
    return "cbr";
  case SourceKind::Ftp:
    return "ftp";
  case SourceKind::Flood:
    return "flood";
  }
  return "?";
}

SourceKind
parse_source_kind(std::string_view text)
{
  if (text == "poisson") {
    return SourceKind::PoissonBackground;
  }
  if (text == "cbr") {
    return SourceKind::Cbr;
  }
  if (text == "ftp") {
    return SourceKind::Ftp;
  }
  if (text == "flood") {
    return SourceKind::Flood;
  }
  throw ConfigError("unknown source kind '" + std::string(text) + "'");
}

std::vector<std::string>
validation_errors(const ScenarioConfig& cfg)
{
  std::vector<std::string> out;
  if (!(std::isfinite(cfg.horizon_s) && cfg.horizon_s >= 0.0)) {
    out.emplace_back("horizon_s: must be finite and >= 0");
  }
  if (!positive(cfg.link_capacity_Bps)) {
    out.emplace_back("link_capacity_Bps: must be > 0");
  }
  if (cfg.queue_mode == QueueMode::Markovian && !positive(cfg.service_rate)) {
    out.emplace_back("queue.mu: must be > 0 in markovian mode");
  }
  if (!positive(cfg.window_s)) {
    out.emplace_back("window_s: must be > 0");
  }
  for (auto& d : validation_errors(cfg.detector)) {
    out.push_back("detector." + d);
  }

  std::set<FlowKey> flows;
  auto check_all = [&](const std::vector<SourceSpec>& list, const std::string& name) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::string where = name + "[" + std::to_string(i) + "]";
      check_source(list[i], where, out);
      if (!flows.insert(list[i].flow).second) {
        out.push_back(where + ".flow: duplicate flow key");
      }
    }
  };
  check_all(cfg.sources, "sources");
  for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
    if (cfg.sources[i].kind == SourceKind::Flood) {
      out.push_back("sources[" + std::to_string(i) + "].kind: floods belong in attack.floods");
    }
  }
  check_all(cfg.attack.floods, "attack.floods");
  for (std::size_t i = 0; i < cfg.attack.floods.size(); ++i) {
    if (cfg.attack.floods[i].kind != SourceKind::Flood) {
      out.push_back("attack.floods[" + std::to_string(i) + "].kind: must be flood");
    }
  }
  return out;
}

void
validate(const ScenarioConfig& cfg)
{
  auto errors = validation_errors(cfg);
  if (!errors.empty()) {
    throw ConfigError(std::move(errors));
  }
}

std::vector<SourceSpec>
all_sources(const ScenarioConfig& cfg)
{
  std::vector<SourceSpec> out = cfg.sources;
  out.insert(out.end(), cfg.attack.floods.begin(), cfg.attack.floods.end());
  return out;
}

ScenarioConfig
without_attack(ScenarioConfig cfg)
{
  cfg.attack.floods.clear();
  return cfg;
}

namespace {

std::string
join_diagnostics(const std::vector<std::string>& diagnostics)
{
  std::ostringstream os;
  os << "invalid configuration";
  for (const auto& d : diagnostics) {
    os << "\n  " << d;
  }
  return os.str();
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
  : Error(join_diagnostics(diagnostics))
  , m_diagnostics(std::move(diagnostics))
{
}

} // namespace floodgate
