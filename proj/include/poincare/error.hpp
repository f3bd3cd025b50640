#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace poincare {

enum class Errc {
  NonUnitary,
  BoundaryPoint,
  BudgetExceeded,
  InsufficientBall,
  UnboundedSeed,
  QuadratureDiverged,
  TargetNotReached,
  OrbitSingularity,
  DegenerateBasis,
  EquivalentPoints,
  ConfigError,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure in the library is reported through this type; `code()`
/// identifies the failure class so callers (the CLI in particular) can map
/// it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace poincare
