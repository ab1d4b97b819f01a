#pragma once

#include <stdexcept>
#include <string>

namespace aida {

enum class Errc {
    precondition,
    clock_violation,
    budget_too_small,
    parse_error,
    empty_list,
    no_peer_statements,
    auth_error,
    rate_limited,
    context_overflow,
    replay_miss,
    missing_variable,
    invalid_spec,
    unknown_agent,
    topology_violation,
    invalid_transcript,
    award_out_of_range,
    empty_scores,
    missing_domain,
    io_error,
    config_error,
    http_error,
};

const char* to_string(Errc code);

/// Single exception type for the whole engine; the code tells callers
/// (and the C API layer) what went wrong without a class per failure.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, Errc code, const std::string& message) {
    if (!condition) {
        fail(code, message);
    }
}

}  // namespace aida
