#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wpscat {

enum class ErrorCode {
    NonPositiveWidth,
    NonFiniteDensity,
    EmptySamples,
    ZeroWaveVector,
    OutOfRange,
    EvanescentFronting,
    DomainTooSmall,
    WindowTooSmall,
    ZeroWidth,
    GridTooCoarse,
    StabilityViolation,
    BoundaryContamination,
    GridMismatch,
    InvalidArgument,
    ConfigError,
    InvariantViolation,
};

std::string_view to_string(ErrorCode code);

/// Library error. Carries a machine-checkable code and, for per-bin
/// validation failures, the offending bin index.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what,
          std::optional<std::size_t> index = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> index_;
};

}  // namespace wpscat
