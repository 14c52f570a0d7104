#include "wpscat/error.hpp"

namespace wpscat {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonPositiveWidth: return "NonPositiveWidth";
    case ErrorCode::NonFiniteDensity: return "NonFiniteDensity";
    case ErrorCode::EmptySamples: return "EmptySamples";
    case ErrorCode::ZeroWaveVector: return "ZeroWaveVector";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EvanescentFronting: return "EvanescentFronting";
    case ErrorCode::DomainTooSmall: return "DomainTooSmall";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::ZeroWidth: return "ZeroWidth";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::BoundaryContamination: return "BoundaryContamination";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index)
{
}

}  // namespace wpscat
