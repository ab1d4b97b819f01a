#include "errors.hpp"

namespace aida {

const char* to_string(Errc code) {
    switch (code) {
        case Errc::precondition: return "precondition violation";
        case Errc::clock_violation: return "clock violation";
        case Errc::budget_too_small: return "budget too small";
        case Errc::parse_error: return "parse error";
        case Errc::empty_list: return "empty list";
        case Errc::no_peer_statements: return "no peer statements";
        case Errc::auth_error: return "auth error";
        case Errc::rate_limited: return "rate limited";
        case Errc::context_overflow: return "context overflow";
        case Errc::replay_miss: return "replay miss";
        case Errc::missing_variable: return "missing variable";
        case Errc::invalid_spec: return "invalid model spec";
        case Errc::unknown_agent: return "unknown agent";
        case Errc::topology_violation: return "topology violation";
        case Errc::invalid_transcript: return "invalid transcript";
        case Errc::award_out_of_range: return "award out of range";
        case Errc::empty_scores: return "empty scores";
        case Errc::missing_domain: return "missing domain";
        case Errc::io_error: return "io error";
        case Errc::config_error: return "config error";
        case Errc::http_error: return "http error";
    }
    return "unknown error";
}

}  // namespace aida
