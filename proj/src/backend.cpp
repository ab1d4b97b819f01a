#include "backend.hpp"

#include "errors.hpp"
#include "util.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace aida {

using nlohmann::json;

const char* to_string(Role role) {
    switch (role) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    return "?";
}

void CompletionRequest::validate() const {
    require(!messages.empty(), Errc::precondition, "request has no messages");
    for (const auto& message : messages) {
        require(!message.content.empty(), Errc::precondition, "message content is empty");
    }
    require(temperature >= 0.0, Errc::precondition, "temperature must be >= 0");
    require(max_tokens > 0, Errc::precondition, "max_tokens must be positive");
    require(!model_id.empty(), Errc::precondition, "model_id is empty");
}

std::string canonical_request(const CompletionRequest& request) {
    // \x1f separates fields, \x1e separates messages; neither occurs in
    // chat text, so the encoding is unambiguous.
    std::ostringstream out;
    out << "model=" << request.model_id << '\x1f';
    char temp[64];
    std::snprintf(temp, sizeof(temp), "temp=%.6f", request.temperature);
    out << temp << '\x1f';
    out << "seed=" << request.seed << '\x1f';
    for (const auto& message : request.messages) {
        out << to_string(message.role) << ':' << message.content << '\x1e';
    }
    return out.str();
}

std::string request_digest(const CompletionRequest& request) {
    return fnv1a_hex(canonical_request(request));
}

bool Cassette::record(const std::string& digest, CompletionResponse response,
                      bool warn_on_overwrite) {
    auto [it, inserted] = entries_.insert_or_assign(digest, std::move(response));
    (void)it;
    if (inserted) {
        order_.push_back(digest);
    } else if (warn_on_overwrite) {
        warn("cassette: overwriting existing entry for digest " + digest);
    }
    return inserted;
}

const CompletionResponse* Cassette::find(const std::string& digest) const {
    auto it = entries_.find(digest);
    return it == entries_.end() ? nullptr : &it->second;
}

void Cassette::append_line(std::ostream& out, const std::string& digest,
                           const CompletionResponse& response) {
    json line = {
        {"digest", digest},
        {"response",
         {{"content", response.content},
          {"prompt_tokens", response.prompt_tokens},
          {"completion_tokens", response.completion_tokens}}},
    };
    out << line.dump() << '\n';
}

void Cassette::save(const std::filesystem::path& path) const {
    std::ostringstream out;
    for (const auto& digest : order_) {
        append_line(out, digest, entries_.at(digest));
    }
    write_file(path, out.str());
}

Cassette Cassette::load(const std::filesystem::path& path) {
    Cassette cassette;
    std::string text = read_file(path);
    std::size_t line_no = 0;
    for (const auto& line : split_lines(text)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        json parsed;
        try {
            parsed = json::parse(line);
            const auto& response = parsed.at("response");
            CompletionResponse value;
            value.content = response.at("content").get<std::string>();
            value.prompt_tokens = response.value("prompt_tokens", 0);
            value.completion_tokens = response.value("completion_tokens", 0);
            cassette.record(parsed.at("digest").get<std::string>(), std::move(value),
                            /*warn_on_overwrite=*/false);
        } catch (const json::exception& ex) {
            fail(Errc::parse_error, "cassette " + path.string() + " line " +
                                        std::to_string(line_no) + ": " + ex.what());
        }
    }
    return cassette;
}

std::chrono::milliseconds RetryPolicy::delay_before_retry(int attempt) const {
    if (attempt < 1) {
        attempt = 1;
    }
    auto delay = base_delay;
    for (int i = 1; i < attempt; ++i) {
        if (delay >= max_delay / 2) {
            return max_delay;
        }
        delay *= 2;
    }
    return std::min(delay, max_delay);
}

ReplayBackend ReplayBackend::from_file(const std::filesystem::path& path) {
    return ReplayBackend(Cassette::load(path));
}

CompletionResponse ReplayBackend::complete(const CompletionRequest& request) {
    request.validate();
    const std::string digest = request_digest(request);
    const CompletionResponse* hit = cassette_.find(digest);
    if (hit == nullptr) {
        fail(Errc::replay_miss,
             "no cassette entry for digest " + digest +
                 " (prompt construction diverged from the recording)");
    }
    return *hit;
}

RecordBackend::RecordBackend(std::shared_ptr<Backend> inner, std::filesystem::path cassette_path)
    : inner_(std::move(inner)), path_(std::move(cassette_path)) {
    if (path_.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path_.parent_path(), ec);
    }
    out_ = std::make_unique<std::ofstream>(path_, std::ios::binary | std::ios::app);
    if (!*out_) {
        fail(Errc::io_error, "cannot open cassette " + path_.string() + " for append");
    }
}

RecordBackend::~RecordBackend() = default;

CompletionResponse RecordBackend::complete(const CompletionRequest& request) {
    CompletionResponse response = inner_->complete(request);
    const std::string digest = request_digest(request);
    {
        std::lock_guard lock(mutex_);
        seen_.record(digest, response);
        Cassette::append_line(*out_, digest, response);
        out_->flush();
        if (!*out_) {
            fail(Errc::io_error, "cannot append to cassette " + path_.string());
        }
    }
    return response;
}

std::string HttpBackend::request_body_json(const CompletionRequest& request) {
    json body;
    body["model"] = request.model_id;
    json messages = json::array();
    for (const auto& message : request.messages) {
        messages.push_back({{"role", to_string(message.role)}, {"content", message.content}});
    }
    body["messages"] = std::move(messages);
    body["temperature"] = request.temperature;
    body["seed"] = request.seed;
    body["max_tokens"] = request.max_tokens;
    return body.dump();
}

CompletionResponse HttpBackend::parse_response_json(const std::string& body) {
    try {
        json parsed = json::parse(body);
        CompletionResponse response;
        response.content =
            parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        if (parsed.contains("usage") && parsed["usage"].is_object()) {
            response.prompt_tokens = parsed["usage"].value("prompt_tokens", 0);
            response.completion_tokens = parsed["usage"].value("completion_tokens", 0);
        }
        return response;
    } catch (const json::exception& ex) {
        fail(Errc::parse_error, std::string("malformed completion response: ") + ex.what());
    }
}

}  // namespace aida
