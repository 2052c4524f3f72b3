#pragma once

#include <cmath>
#include <cstdint>

namespace floodgate {

// Simulated time is kept in integer nanoseconds so that event ordering does
// not depend on floating-point rounding.
using TimeNs = std::int64_t;

inline constexpr TimeNs kNsPerSecond = 1'000'000'000;

inline TimeNs
seconds_to_ns(double seconds)
{
  return static_cast<TimeNs>(std::llround(seconds * static_cast<double>(kNsPerSecond)));
}

inline constexpr double
ns_to_seconds(TimeNs ns)
{
  return static_cast<double>(ns) / static_cast<double>(kNsPerSecond);
}

} // namespace floodgate
