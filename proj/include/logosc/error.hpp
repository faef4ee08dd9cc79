#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace logosc {

enum class ErrorCode {
    InvalidParameter,
    NonPositiveTime,
    NonPositiveDiscriminant,
    UnsupportedFamily,
    UnsupportedInitialConditions,
    OutOfDomain,
    OrderTooLarge,
    BlowUp,
    StepFailure,
    QuadratureFailure,
    InvalidConfig,
};

inline constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::NonPositiveDiscriminant: return "NonPositiveDiscriminant";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::UnsupportedInitialConditions: return "UnsupportedInitialConditions";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Error raised when the integrator's solution leaves its valid region.
/// `last_valid_t` is the last time at which the state was accepted.
class BlowUpError : public Error {
public:
    BlowUpError(double last_valid_t, const std::string& what)
        : Error(ErrorCode::BlowUp, what), last_valid_t_(last_valid_t) {}

    [[nodiscard]] double last_valid_t() const noexcept { return last_valid_t_; }

private:
    double last_valid_t_;
};

}  // namespace logosc
