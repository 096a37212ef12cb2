#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ktree {

enum class ErrorCode {
    invalid_params,
    invalid_b,
    resource_exhausted,
    missing_history,
    degree_below_k,
    d_max_too_small,
    too_large,
    k_mismatch,
    insufficient_tail,
    parse_error,
    io_error,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this type; the code lets callers
// (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::invalid_b: return "invalid-b";
    case ErrorCode::resource_exhausted: return "resource-exhausted";
    case ErrorCode::missing_history: return "missing-history";
    case ErrorCode::degree_below_k: return "degree-below-k";
    case ErrorCode::d_max_too_small: return "d_max-too-small";
    case ErrorCode::too_large: return "too-large";
    case ErrorCode::k_mismatch: return "k-mismatch";
    case ErrorCode::insufficient_tail: return "insufficient-tail";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

} // namespace ktree
