// HTTP transport for the chat-completions backend. Kept in its own
// translation unit so the heavy httplib include stays out of everything else.

#include "backend.hpp"
#include "errors.hpp"
#include "util.hpp"

#include <httplib.h>

#include <thread>

namespace aida {

namespace {

struct SplitEndpoint {
    std::string base;        // scheme://host[:port]
    std::string path_prefix; // e.g. /v1
};

SplitEndpoint split_endpoint(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    require(scheme_end != std::string::npos, Errc::config_error,
            "endpoint must include a scheme: " + endpoint);
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {endpoint, ""};
    }
    std::string prefix = endpoint.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') {
        prefix.pop_back();
    }
    return {endpoint.substr(0, path_start), prefix};
}

bool transient_status(int status) {
    return status == 408 || status == 429 || status >= 500;
}

bool looks_like_context_overflow(const std::string& body) {
    return contains_ci(body, "context_length") || contains_ci(body, "context length") ||
           contains_ci(body, "maximum context");
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    sleeper_ = [](std::chrono::milliseconds delay) { std::this_thread::sleep_for(delay); };
}

void HttpBackend::set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper) {
    sleeper_ = std::move(sleeper);
}

std::chrono::milliseconds HttpBackend::pending_cooldown() const {
    std::lock_guard lock(cooldown_mutex_);
    const auto now = std::chrono::steady_clock::now();
    if (cooldown_until_ <= now) {
        return std::chrono::milliseconds(0);
    }
    return std::chrono::duration_cast<std::chrono::milliseconds>(cooldown_until_ - now);
}

void HttpBackend::extend_cooldown(std::chrono::milliseconds delay) {
    std::lock_guard lock(cooldown_mutex_);
    const auto until = std::chrono::steady_clock::now() + delay;
    if (until > cooldown_until_) {
        cooldown_until_ = until;
    }
}

CompletionResponse HttpBackend::complete(const CompletionRequest& request) {
    request.validate();
    require(!config_.api_key.empty(), Errc::auth_error, "no API credential configured");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    require(config_.endpoint.rfind("https://", 0) != 0, Errc::config_error,
            "built without OpenSSL; https endpoints are unavailable");
#endif

    const SplitEndpoint endpoint = split_endpoint(config_.endpoint);
    const std::string body = request_body_json(request);
    const std::string path = endpoint.path_prefix + "/chat/completions";

    httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};

    int attempt = 0;
    while (true) {
        ++attempt;
        // Honor a cooldown another worker may have set after throttling.
        if (const auto wait = pending_cooldown(); wait.count() > 0) {
            sleeper_(wait);
        }

        // One client per call: httplib clients are not thread-safe, and the
        // backend must serve concurrent run workers.
        httplib::Client client(endpoint.base);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);

        auto result = client.Post(path, headers, body, "application/json");

        std::string failure;
        if (result) {
            if (result->status == 200) {
                CompletionResponse response = parse_response_json(result->body);
                // Token accounting is advisory; flag likely truncation.
                if (response.completion_tokens >= request.max_tokens) {
                    warn("completion used the full max_tokens budget (" +
                         std::to_string(response.completion_tokens) + "); output may be cut off");
                }
                return response;
            }
            if (result->status == 401 || result->status == 403) {
                fail(Errc::auth_error, "provider rejected credential (HTTP " +
                                           std::to_string(result->status) + ")");
            }
            if (result->status == 400 && looks_like_context_overflow(result->body)) {
                fail(Errc::context_overflow,
                     "provider rejected request length; memory assembly exceeded the model window");
            }
            if (!transient_status(result->status)) {
                fail(Errc::http_error, "HTTP " + std::to_string(result->status) + ": " +
                                           result->body.substr(0, 200));
            }
            failure = "HTTP " + std::to_string(result->status);
        } else {
            failure = "connection error " + httplib::to_string(result.error());
        }

        if (attempt >= config_.retry.max_attempts) {
            fail(Errc::rate_limited,
                 "giving up after " + std::to_string(attempt) + " attempts; last: " + failure);
        }
        const auto delay = config_.retry.delay_before_retry(attempt);
        extend_cooldown(delay);
        sleeper_(delay);
    }
}

}  // namespace aida
