#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace evrep {

using Minutes = double;
using Km = double;
using Euros = double;
using Fraction = double;
using RequestId = std::int64_t;
using LocationIndex = std::size_t;

inline constexpr LocationIndex kDepot = 0;

// Absorbs floating-point noise in chained schedule propagation.
inline constexpr Minutes kTimeEps = 1e-6;
inline constexpr Fraction kBatteryEps = 1e-9;

enum class ErrorKind {
  UnknownRequest,
  WrongKind,
  IndexOutOfRange,
  GapOutOfRange,
  InvalidInstance,
  ParseError,
  InstanceTooLarge,
  DegenerateConfig,
  AccountingMismatch,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), _kind(kind) {
  }

  ErrorKind kind() const {
    return _kind;
  }

private:
  ErrorKind _kind;
};

enum class Objective { Profit, Requests };

const char* to_string(Objective objective);
Objective objective_from_string(const std::string& name);

} // namespace evrep
