#pragma once

#include <cstdint>
#include <random>

namespace floodgate {

/// Deterministic random stream. The uniform-to-double mapping and the
/// exponential transform are done here rather than through <random>
/// distributions, whose output is implementation-defined.
class RandomStream
{
public:
  explicit RandomStream(std::uint64_t seed)
    : m_engine(seed)
  {
  }

  /// Derive an independent stream for sub-component `index` of a run.
  static RandomStream derive(std::uint64_t seed, std::uint64_t index);

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform();

  std::uint64_t
  next_raw()
  {
    return m_engine();
  }

private:
  std::mt19937_64 m_engine;
};

/// Inverse-CDF transform of a uniform draw `u` in [0, 1) to Exponential(rate).
double exponential_from_uniform(double u, double rate);

/// Draw from Exponential(rate), in seconds. Throws InvalidParameter if rate <= 0.
double sample_exponential(double rate, RandomStream& rng);

std::uint64_t splitmix64(std::uint64_t x) noexcept;

} // namespace floodgate
