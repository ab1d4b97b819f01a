#pragma once

#include "phase.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace aida {

enum class EventKind {
    prompt_issued,
    document_assigned,
    statement,
    reaction,
    thought_updated,
    idea_scored,
    error,
};

const char* to_string(EventKind kind);

struct TranscriptEvent {
    std::string run_id;
    std::int64_t seed = 0;
    std::uint64_t timestamp = 0;
    Phase phase = Phase::Preparation;
    int round = 0;  // 0 during Preparation
    EventKind kind = EventKind::statement;
    std::string agent_id;  // agent id or "facilitator"
    nlohmann::json payload;
};

/// Append-only event log of one full run. Persisted as UTF-8 JSONL: a
/// header object on the first line, one event object per following line.
class Transcript {
public:
    struct Header {
        std::string run_id;
        std::string model;
        std::int64_t seed = 0;
        std::string config_digest;
    };

    Transcript() = default;
    explicit Transcript(Header header) : header_(std::move(header)) {}

    const Header& header() const { return header_; }
    const std::vector<TranscriptEvent>& events() const { return events_; }

    /// Appends one event; timestamps must strictly increase and phases must
    /// be non-decreasing.
    void append(TranscriptEvent event);

    /// A run is valid unless it was aborted by a fatal error event.
    bool valid() const;

    /// Highest phase any event has reached, or nullopt before the first event.
    std::optional<Phase> max_phase() const;

    std::vector<std::string> agent_ids() const;

    std::string to_jsonl() const;
    void save(const std::filesystem::path& path) const;
    static Transcript load(const std::filesystem::path& path);
    static Transcript from_jsonl(const std::string& text);

private:
    Header header_;
    std::vector<TranscriptEvent> events_;
};

}  // namespace aida
