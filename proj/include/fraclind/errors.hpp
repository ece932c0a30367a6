#ifndef FRACLIND_ERRORS_HPP
#define FRACLIND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fraclind {

enum class ErrorCode {
    DimensionMismatch,
    RealityViolation,
    NotResonant,
    NonPrimitive,
    DegenerateAverage,
    NoStationaryPoint,
    OrderExceeded,
    SingularHessian,
    DomainViolation,
    AssumptionAViolated,
    ZeroBranch,
    CompatibilityViolation,
    DegenerateGrid,
    CapExceeded,
    BoundViolated,
    CancellationViolated,
    NotIsolated,
    NonMonotone,
    OutOfRange,
    SingularDenominator,
    ParseError,
    ValidationError,
    IoError
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception; carries a stable code so the CLI can surface the
/// originating module's error verbatim.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace fraclind

#endif
