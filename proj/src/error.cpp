#include "poincare/error.hpp"

namespace poincare {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonUnitary: return "NonUnitary";
    case Errc::BoundaryPoint: return "BoundaryPoint";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::InsufficientBall: return "InsufficientBall";
    case Errc::UnboundedSeed: return "UnboundedSeed";
    case Errc::QuadratureDiverged: return "QuadratureDiverged";
    case Errc::TargetNotReached: return "TargetNotReached";
    case Errc::OrbitSingularity: return "OrbitSingularity";
    case Errc::DegenerateBasis: return "DegenerateBasis";
    case Errc::EquivalentPoints: return "EquivalentPoints";
    case Errc::ConfigError: return "ConfigError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace poincare
