#pragma once

#include "phase.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace aida {

/// What an agent took from one peer's statements: points it agrees with or
/// finds interesting, and points it considers contradictory or lacking.
/// Either list may be empty, but both are always present.
struct PeerAssessment {
    std::string peer_id;
    std::vector<std::string> agree_or_interesting;
    std::vector<std::string> contradictory_or_missing;

    bool operator==(const PeerAssessment&) const = default;
};

/// The agent's evolving position document: five headed sections (a-e), each
/// holding the agent's own bullets plus per-peer assessments, all rendered
/// to a fixed text layout that parses back losslessly.
class CurrentThought {
public:
    struct Section {
        std::vector<std::string> bullets;
        std::map<std::string, PeerAssessment> assessments;  // keyed by peer id

        bool operator==(const Section&) const = default;
    };

    static constexpr int kSectionCount = 5;

    CurrentThought() = default;
    explicit CurrentThought(std::string source_domain) : source_domain_(std::move(source_domain)) {}

    const std::string& source_domain() const { return source_domain_; }
    std::uint64_t last_updated() const { return last_updated_; }
    void set_last_updated(std::uint64_t t) { last_updated_ = t; }

    Section& section(int index);
    const Section& section(int index) const;
    Section& section(Phase phase) { return section(section_index(phase)); }
    const Section& section(Phase phase) const { return section(section_index(phase)); }

    bool empty() const;

    /// Renders the full layout (metadata line, then sections a-e with their
    /// lead-ins, bullets and peer blocks).
    std::string to_text() const;

    /// Inverse of to_text. Throws Errc::parse_error on malformed input.
    static CurrentThought from_text(const std::string& text);

    bool operator==(const CurrentThought&) const = default;

    static const char* section_heading(int index);
    static const char* section_topic(int index);

private:
    std::string source_domain_ = "the source domain";
    std::array<Section, kSectionCount> sections_;
    std::uint64_t last_updated_ = 0;
};

}  // namespace aida
