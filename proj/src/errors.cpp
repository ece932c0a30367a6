#include "fraclind/errors.hpp"

namespace fraclind {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::RealityViolation: return "RealityViolation";
        case ErrorCode::NotResonant: return "NotResonant";
        case ErrorCode::NonPrimitive: return "NonPrimitive";
        case ErrorCode::DegenerateAverage: return "DegenerateAverage";
        case ErrorCode::NoStationaryPoint: return "NoStationaryPoint";
        case ErrorCode::OrderExceeded: return "OrderExceeded";
        case ErrorCode::SingularHessian: return "SingularHessian";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::AssumptionAViolated: return "AssumptionAViolated";
        case ErrorCode::ZeroBranch: return "ZeroBranch";
        case ErrorCode::CompatibilityViolation: return "CompatibilityViolation";
        case ErrorCode::DegenerateGrid: return "DegenerateGrid";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::BoundViolated: return "BoundViolated";
        case ErrorCode::CancellationViolated: return "CancellationViolated";
        case ErrorCode::NotIsolated: return "NotIsolated";
        case ErrorCode::NonMonotone: return "NonMonotone";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::SingularDenominator: return "SingularDenominator";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace fraclind
