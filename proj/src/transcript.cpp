#include "transcript.hpp"

#include "errors.hpp"
#include "util.hpp"

#include <algorithm>
#include <sstream>

namespace aida {

using nlohmann::json;

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::prompt_issued: return "prompt_issued";
        case EventKind::document_assigned: return "document_assigned";
        case EventKind::statement: return "statement";
        case EventKind::reaction: return "reaction";
        case EventKind::thought_updated: return "thought_updated";
        case EventKind::idea_scored: return "idea_scored";
        case EventKind::error: return "error";
    }
    return "?";
}

namespace {

EventKind event_kind_from_string(const std::string& name) {
    static const std::pair<const char*, EventKind> table[] = {
        {"prompt_issued", EventKind::prompt_issued},
        {"document_assigned", EventKind::document_assigned},
        {"statement", EventKind::statement},
        {"reaction", EventKind::reaction},
        {"thought_updated", EventKind::thought_updated},
        {"idea_scored", EventKind::idea_scored},
        {"error", EventKind::error},
    };
    for (const auto& [text, kind] : table) {
        if (name == text) {
            return kind;
        }
    }
    fail(Errc::parse_error, "unknown event kind: " + name);
}

json event_to_json(const TranscriptEvent& event) {
    return json{
        {"run_id", event.run_id}, {"seed", event.seed},
        {"t", event.timestamp},   {"phase", to_string(event.phase)},
        {"round", event.round},   {"kind", to_string(event.kind)},
        {"agent", event.agent_id}, {"payload", event.payload},
    };
}

TranscriptEvent event_from_json(const json& value) {
    TranscriptEvent event;
    event.run_id = value.at("run_id").get<std::string>();
    event.seed = value.at("seed").get<std::int64_t>();
    event.timestamp = value.at("t").get<std::uint64_t>();
    auto phase = phase_from_string(value.at("phase").get<std::string>());
    require(phase.has_value(), Errc::parse_error, "unknown phase in event");
    event.phase = *phase;
    event.round = value.at("round").get<int>();
    event.kind = event_kind_from_string(value.at("kind").get<std::string>());
    event.agent_id = value.at("agent").get<std::string>();
    event.payload = value.at("payload");
    return event;
}

}  // namespace

void Transcript::append(TranscriptEvent event) {
    if (!events_.empty()) {
        require(event.timestamp > events_.back().timestamp, Errc::clock_violation,
                "event timestamps must strictly increase");
        require(!(event.phase < events_.back().phase), Errc::precondition,
                "events must not move backwards through phases");
    }
    events_.push_back(std::move(event));
}

bool Transcript::valid() const {
    return std::none_of(events_.begin(), events_.end(), [](const TranscriptEvent& event) {
        return event.kind == EventKind::error && event.payload.value("fatal", false);
    });
}

std::optional<Phase> Transcript::max_phase() const {
    if (events_.empty()) {
        return std::nullopt;
    }
    return events_.back().phase;
}

std::vector<std::string> Transcript::agent_ids() const {
    std::vector<std::string> ids;
    for (const auto& event : events_) {
        if (event.agent_id.empty() || event.agent_id == "facilitator") {
            continue;
        }
        if (std::find(ids.begin(), ids.end(), event.agent_id) == ids.end()) {
            ids.push_back(event.agent_id);
        }
    }
    return ids;
}

std::string Transcript::to_jsonl() const {
    std::ostringstream out;
    json header = {
        {"run_id", header_.run_id},
        {"model", header_.model},
        {"seed", header_.seed},
        {"config_digest", header_.config_digest},
        {"schema", "transcript-v1"},
    };
    out << header.dump() << '\n';
    for (const auto& event : events_) {
        out << event_to_json(event).dump() << '\n';
    }
    return out.str();
}

void Transcript::save(const std::filesystem::path& path) const {
    write_file(path, to_jsonl());
}

Transcript Transcript::from_jsonl(const std::string& text) {
    const auto lines = split_lines(text);
    require(!lines.empty() && !trim(lines[0]).empty(), Errc::parse_error, "empty transcript");

    Transcript transcript;
    try {
        json header = json::parse(lines[0]);
        require(header.value("schema", "") == "transcript-v1", Errc::parse_error,
                "missing or unsupported transcript schema marker");
        transcript.header_.run_id = header.at("run_id").get<std::string>();
        transcript.header_.model = header.at("model").get<std::string>();
        transcript.header_.seed = header.at("seed").get<std::int64_t>();
        transcript.header_.config_digest = header.at("config_digest").get<std::string>();
        for (std::size_t i = 1; i < lines.size(); ++i) {
            if (trim(lines[i]).empty()) {
                continue;
            }
            transcript.append(event_from_json(json::parse(lines[i])));
        }
    } catch (const json::exception& ex) {
        fail(Errc::parse_error, std::string("malformed transcript: ") + ex.what());
    }
    return transcript;
}

Transcript Transcript::load(const std::filesystem::path& path) {
    return from_jsonl(read_file(path));
}

}  // namespace aida
