#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace floodgate {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument is outside the domain of the operation.
class InvalidParameter : public Error
{
public:
  using Error::Error;
};

/// A scenario or command configuration failed validation. Carries one
/// diagnostic per offending field.
class ConfigError : public Error
{
public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  explicit ConfigError(const std::string& diagnostic)
    : ConfigError(std::vector<std::string>{diagnostic})
  {
  }

  const std::vector<std::string>&
  diagnostics() const noexcept
  {
    return m_diagnostics;
  }

private:
  std::vector<std::string> m_diagnostics;
};

/// Arrival rate at or above service rate with an unbounded buffer.
class UnstableSystem : public Error
{
public:
  using Error::Error;
};

/// A trace has packet lifecycles that do not match up.
class IntegrityError : public Error
{
public:
  using Error::Error;
};

/// Events were delivered out of time order.
class OrderingError : public Error
{
public:
  using Error::Error;
};

/// The engine reached a state that should be unreachable.
class InternalStateError : public Error
{
public:
  using Error::Error;
};

/// Inputs that should describe the same run disagree (e.g. horizons).
class InputError : public Error
{
public:
  using Error::Error;
};

class CalibrationError : public Error
{
public:
  CalibrationError(const std::string& what, double loss_at_low, double loss_at_high)
    : Error(what)
    , loss_at_low(loss_at_low)
    , loss_at_high(loss_at_high)
  {
  }

  double loss_at_low;
  double loss_at_high;
};

} // namespace floodgate
