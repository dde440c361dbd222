#include "relay/error.hpp"

namespace relay {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_parameter: return "invalid_parameter";
        case ErrorCode::degenerate_weights: return "degenerate_weights";
        case ErrorCode::infeasible_target: return "infeasible_target";
        case ErrorCode::unsupported_size: return "unsupported_size";
        case ErrorCode::recovery_failure: return "recovery_failure";
        case ErrorCode::case_inconsistency: return "case_inconsistency";
        case ErrorCode::dimension_mismatch: return "dimension_mismatch";
        case ErrorCode::config_error: return "config_error";
    }
    return "unknown";
}

} // namespace relay
