#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace aida {

enum class Role { system, user, assistant };

const char* to_string(Role role);

struct ChatMessage {
    Role role = Role::user;
    std::string content;
};

struct CompletionRequest {
    std::string model_id;
    std::vector<ChatMessage> messages;
    double temperature = 0.7;
    std::int64_t seed = 0;
    int max_tokens = 1024;

    /// Throws on empty messages / empty message content / negative temperature.
    void validate() const;
};

struct CompletionResponse {
    std::string content;
    int prompt_tokens = 0;
    int completion_tokens = 0;

    bool operator==(const CompletionResponse&) const = default;
};

/// Byte-stable canonical form of a request. Covers model_id, temperature,
/// seed and the role:content sequence; max_tokens is excluded
/// so budget tweaks do not invalidate recorded cassettes.
std::string canonical_request(const CompletionRequest& request);
std::string request_digest(const CompletionRequest& request);

/// Recorded request->response fixtures, persisted as one JSON object per
/// line: {digest, response:{content, prompt_tokens, completion_tokens}}.
class Cassette {
public:
    /// Returns true if the digest was new, false if an existing entry was
    /// overwritten (which also emits a warning). Loading replays the file's
    /// append order silently, last entry wins.
    bool record(const std::string& digest, CompletionResponse response,
                bool warn_on_overwrite = true);

    const CompletionResponse* find(const std::string& digest) const;
    std::size_t size() const { return order_.size(); }

    void save(const std::filesystem::path& path) const;
    static Cassette load(const std::filesystem::path& path);

    /// Appends one entry line to an open cassette file.
    static void append_line(std::ostream& out, const std::string& digest,
                            const CompletionResponse& response);

private:
    std::map<std::string, CompletionResponse> entries_;
    std::vector<std::string> order_;
};

/// Chat-completion provider interface. Implementations must be callable
/// from multiple run workers concurrently; calls are independent and any
/// shared bookkeeping is synchronized internally.
class Backend {
public:
    virtual ~Backend() = default;
    virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

/// Capped exponential backoff schedule for transient provider failures.
struct RetryPolicy {
    int max_attempts = 5;
    std::chrono::milliseconds base_delay{1000};
    std::chrono::milliseconds max_delay{30000};

    /// Delay before retry after failed attempt `attempt` (1-based).
    /// Non-decreasing in `attempt` and never above max_delay.
    std::chrono::milliseconds delay_before_retry(int attempt) const;
};

/// Serves responses from a recorded cassette. A miss means prompt
/// construction diverged from the recording and is reported as such.
class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(Cassette cassette) : cassette_(std::move(cassette)) {}
    static ReplayBackend from_file(const std::filesystem::path& path);

    CompletionResponse complete(const CompletionRequest& request) override;

private:
    Cassette cassette_;
};

/// Forwards to an inner backend and appends every exchange to a cassette
/// file, so one paid run becomes a permanent deterministic fixture.
class RecordBackend : public Backend {
public:
    RecordBackend(std::shared_ptr<Backend> inner, std::filesystem::path cassette_path);
    ~RecordBackend() override;

    CompletionResponse complete(const CompletionRequest& request) override;

private:
    std::shared_ptr<Backend> inner_;
    std::filesystem::path path_;
    std::mutex mutex_;
    Cassette seen_;
    std::unique_ptr<std::ofstream> out_;
};

struct HttpBackendConfig {
    std::string endpoint;  // e.g. https://api.openai.com/v1
    std::string api_key;
    RetryPolicy retry;
    int timeout_seconds = 120;
};

/// OpenAI-compatible chat-completions client over HTTP(S). Safe to share
/// across run workers: each call is independent, and the one piece of
/// shared bookkeeping — a provider-wide cooldown set after throttling, so
/// concurrent callers back off together — sits behind a mutex.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    CompletionResponse complete(const CompletionRequest& request) override;

    /// Test hook: replaces the real sleep between retries.
    void set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper);

    static std::string request_body_json(const CompletionRequest& request);
    static CompletionResponse parse_response_json(const std::string& body);

private:
    std::chrono::milliseconds pending_cooldown() const;
    void extend_cooldown(std::chrono::milliseconds delay);

    HttpBackendConfig config_;
    std::function<void(std::chrono::milliseconds)> sleeper_;
    mutable std::mutex cooldown_mutex_;
    std::chrono::steady_clock::time_point cooldown_until_{};
};

}  // namespace aida
