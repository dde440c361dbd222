#pragma once

#include <stdexcept>
#include <string>

namespace relay {

// Machine-readable failure categories, surfaced verbatim by the CLI.
enum class ErrorCode {
    invalid_parameter,
    degenerate_weights,
    infeasible_target,
    unsupported_size,
    recovery_failure,
    case_inconsistency,
    dimension_mismatch,
    config_error,
};

const char* error_code_name(ErrorCode code);

class SolverError : public std::runtime_error {
public:
    SolverError(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace relay
