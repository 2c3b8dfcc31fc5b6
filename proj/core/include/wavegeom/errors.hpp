#ifndef WAVEGEOM_ERRORS_HPP
#define WAVEGEOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wavegeom {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// metric construction / evaluation
struct SignatureError : Error  { using Error::Error; };
struct LapseBoundError : Error { using Error::Error; };
struct OutOfDomainError : Error { using Error::Error; };

// characteristics
struct DomainExitError : Error { using Error::Error; };
struct StepFailure : Error { using Error::Error; };
struct CausticError : Error { using Error::Error; };
struct DegenerateGradientError : Error { using Error::Error; };

// phase geometry
struct AmbiguousMaximizerError : Error { using Error::Error; };
struct GramSingularError : Error { using Error::Error; };
struct EndpointDefectError : Error { using Error::Error; };
struct BoundViolationError : Error { using Error::Error; };
struct CoordinateCollisionError : Error { using Error::Error; };

// quadrature
struct UnderresolvedError : Error { using Error::Error; };

// strichartz
struct AdmissibilityError : Error { using Error::Error; };

// cli / io
struct ConfigError : Error { using Error::Error; };
struct SchemaMismatchError : Error { using Error::Error; };

}  // namespace wavegeom

#endif
