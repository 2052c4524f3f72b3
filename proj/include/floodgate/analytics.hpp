#pragma once

#include "floodgate/event.hpp"
#include "floodgate/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace floodgate {

inline constexpr double kResidualEpsilon = 1e-9;

/// Measured Little's-law quantities. Only admitted arrivals count toward
/// lambda; dropped packets never entered the system.
struct LittleReport
{
  double lambda_offered = 0.0;
  double lambda_measured = 0.0;
  double N_measured = 0.0;
  double W_measured = 0.0;
  double Nq_measured = 0.0;
  double Wq_measured = 0.0;
  double residual_N = 0.0;
  double residual_Nq = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t admitted = 0;
  std::uint64_t departures = 0;
  std::uint64_t drops = 0;
};

/// Streaming form of little_law_check, for runs too long to keep in memory.
class LittleAccumulator
{
public:
  void ingest(const PacketEvent& event);
  LittleReport finish(TimeNs horizon);

private:
  struct Lifecycle
  {
    TimeNs arrival = 0;
    std::optional<TimeNs> service_start;
  };

  void advance(TimeNs t);

  TimeNs m_last = 0;
  std::uint64_t m_in_system = 0;
  std::uint64_t m_waiting = 0;
  long double m_system_integral = 0.0L;
  long double m_queue_integral = 0.0L;
  long double m_sojourn_sum = 0.0L;
  long double m_wait_sum = 0.0L;
  std::unordered_map<PacketId, Lifecycle> m_open;
  LittleReport m_counts;
};

/// Throws IntegrityError on lifecycles that do not match up.
LittleReport little_law_check(const EventTrace& trace);

struct Mm1Metrics
{
  double rho = 0.0;
  double N = 0.0;
  double W = 0.0;
  double Nq = 0.0;
  double Wq = 0.0;
};

/// Steady-state M/M/1 means. Throws UnstableSystem if lambda >= mu and
/// InvalidParameter for negative lambda or non-positive mu.
Mm1Metrics mm1_mean_metrics(double lambda, double mu);

/// Steady-state blocking probability of M/M/1/K where `buffer_slots` counts
/// waiting positions only; the system holds S = buffer_slots + 1 packets and
/// P = (1 - rho) rho^S / (1 - rho^(S+1)), or 1/(S+1) at rho = 1.
double mm1k_blocking(double lambda, double mu, std::uint32_t buffer_slots);

enum class TrafficClass : std::uint8_t { Cbr, Ftp };

std::string_view to_string(TrafficClass c) noexcept;

struct LossRow
{
  TrafficClass traffic_class = TrafficClass::Cbr;
  std::size_t flood_index = 0; // 1-based
  std::uint64_t arrivals = 0;
  std::uint64_t drops = 0;
  double loss_percent = 0.0;
};

struct ClassLoss
{
  std::uint64_t arrivals = 0;
  std::uint64_t drops = 0;
  double loss_percent = 0.0;
};

struct LossTable
{
  std::vector<LossRow> rows;
  /// Loss outside every flood interval, per class.
  std::optional<ClassLoss> baseline_cbr;
  std::optional<ClassLoss> baseline_ftp;
  /// One note per omitted (class, flood) pair.
  std::vector<std::string> notes;

  const LossRow* find(TrafficClass c, std::size_t flood_index) const;
};

/// Streaming form of loss_by_class.
class LossAccumulator
{
public:
  explicit LossAccumulator(const ScenarioConfig& scenario);
  void ingest(const PacketEvent& event);
  LossTable finish() const;

private:
  struct Tally
  {
    std::uint64_t arrivals = 0;
    std::uint64_t drops = 0;
  };
  struct Tag
  {
    TrafficClass cls;
    std::size_t slot;
  };

  std::unordered_map<FlowKey, TrafficClass, FlowKeyHash> m_classes;
  std::vector<std::pair<TimeNs, TimeNs>> m_floods;
  // m_counts[class][slot]: slot 0 is outside every flood, slot i is flood i.
  std::vector<Tally> m_counts[2];
  std::unordered_map<PacketId, Tag> m_open;
};

/// Per flood interval and class, the percentage of that class's packets
/// arriving in the interval that were dropped.
LossTable loss_by_class(const EventTrace& trace, const ScenarioConfig& scenario);

} // namespace floodgate
