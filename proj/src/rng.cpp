#include "floodgate/rng.hpp"

#include "floodgate/errors.hpp"

#include <cmath>
#include <string>

namespace floodgate {

std::uint64_t
splitmix64(std::uint64_t x) noexcept
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream
RandomStream::derive(std::uint64_t seed, std::uint64_t index)
{
  return RandomStream(splitmix64(splitmix64(seed) ^ splitmix64(index + 1)));
}

double
RandomStream::uniform()
{
  return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

double
exponential_from_uniform(double u, double rate)
{
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidParameter("exponential rate must be positive and finite, got " + std::to_string(rate));
  }
  return -std::log1p(-u) / rate;
}

double
sample_exponential(double rate, RandomStream& rng)
{
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidParameter("exponential rate must be positive and finite, got " + std::to_string(rate));
  }
  return exponential_from_uniform(rng.uniform(), rate);
}

} // namespace floodgate
