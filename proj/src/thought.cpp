#include "thought.hpp"

#include "errors.hpp"
#include "util.hpp"

#include <sstream>

namespace aida {

namespace {

const char* kHeadings[CurrentThought::kSectionCount] = {
    "a. Functional Similarities", "b. Mechanical Differences", "c. Solutions",
    "d. New Challenges",          "e. New Opportunities",
};

// Topic phrase used inside the peer-assessment lead-in of each section.
const char* kTopics[CurrentThought::kSectionCount] = {
    "the functional similarities", "the mechanical differences", "the solutions",
    "the new challenges",          "the new opportunities",
};

std::string section_lead_in(int index, const std::string& source) {
    switch (index) {
        case 0:
            return "The functional similarities between the target domain and the " + source + ":";
        case 1:
            return "How the mechanisms in the " + source +
                   " that produce the common functionalities differ from those in the target "
                   "domain:";
        case 2:
            return "How the functionalities or mechanisms of the " + source +
                   " and the target domain should be modified or retained to solve the "
                   "challenges of the target domain:";
        case 3:
            return "The potential new challenges arising from applying the " + source +
                   "'s mechanisms:";
        case 4:
            return "The additional opportunities generated by applying the " + source +
                   "'s mechanisms:";
        default:
            fail(Errc::precondition, "section index out of range");
    }
}

std::string agree_lead_in(const std::string& peer, int index) {
    return "The points in " + peer + "'s opinion on the topic of " + kTopics[index] +
           " that I agree with or feel interesting are as follows:";
}

std::string contra_lead_in(const std::string& peer, int index) {
    return "The points in " + peer + "'s opinion on the topic of " + kTopics[index] +
           " that contain contradictions or missing information are as follows:";
}

constexpr const char* kMetaPrefix = "Current thought (updated at t=";

}  // namespace

const char* CurrentThought::section_heading(int index) {
    return kHeadings[index];
}

const char* CurrentThought::section_topic(int index) {
    return kTopics[index];
}

CurrentThought::Section& CurrentThought::section(int index) {
    require(index >= 0 && index < kSectionCount, Errc::precondition, "section index out of range");
    return sections_[static_cast<std::size_t>(index)];
}

const CurrentThought::Section& CurrentThought::section(int index) const {
    require(index >= 0 && index < kSectionCount, Errc::precondition, "section index out of range");
    return sections_[static_cast<std::size_t>(index)];
}

bool CurrentThought::empty() const {
    for (const auto& section : sections_) {
        if (!section.bullets.empty() || !section.assessments.empty()) {
            return false;
        }
    }
    return true;
}

std::string CurrentThought::to_text() const {
    std::ostringstream out;
    out << kMetaPrefix << last_updated_ << ")\n";
    for (int i = 0; i < kSectionCount; ++i) {
        const Section& section = sections_[static_cast<std::size_t>(i)];
        out << '\n' << kHeadings[i] << '\n';
        out << section_lead_in(i, source_domain_) << '\n';
        for (const auto& bullet : section.bullets) {
            out << " - " << bullet << '\n';
        }
        for (const auto& [peer, assessment] : section.assessments) {
            out << agree_lead_in(peer, i) << '\n';
            for (const auto& bullet : assessment.agree_or_interesting) {
                out << " - " << bullet << '\n';
            }
            out << contra_lead_in(peer, i) << '\n';
            for (const auto& bullet : assessment.contradictory_or_missing) {
                out << " - " << bullet << '\n';
            }
        }
    }
    return out.str();
}

CurrentThought CurrentThought::from_text(const std::string& text) {
    const auto lines = split_lines(text);
    require(!lines.empty() && lines[0].rfind(kMetaPrefix, 0) == 0, Errc::parse_error,
            "thought text does not start with the metadata line");

    CurrentThought thought;
    {
        std::string meta = lines[0].substr(std::string(kMetaPrefix).size());
        require(!meta.empty() && meta.back() == ')', Errc::parse_error, "malformed metadata line");
        meta.pop_back();
        try {
            thought.last_updated_ = std::stoull(meta);
        } catch (const std::exception&) {
            fail(Errc::parse_error, "malformed timestamp in metadata line");
        }
    }

    int current_section = -1;
    // Which bullet list the next " - " line belongs to.
    std::vector<std::string>* active_list = nullptr;
    bool source_known = false;

    auto match_heading = [&](const std::string& line) {
        for (int i = 0; i < kSectionCount; ++i) {
            if (line == kHeadings[i]) {
                return i;
            }
        }
        return -1;
    };

    for (std::size_t n = 1; n < lines.size(); ++n) {
        const std::string& line = lines[n];
        if (line.empty()) {
            continue;
        }
        if (int heading = match_heading(line); heading >= 0) {
            require(heading == current_section + 1, Errc::parse_error,
                    "section headings out of order at: " + line);
            current_section = heading;
            active_list = nullptr;
            continue;
        }
        require(current_section >= 0, Errc::parse_error, "content before first section: " + line);

        if (line.rfind(" - ", 0) == 0) {
            require(active_list != nullptr, Errc::parse_error, "bullet without a lead-in: " + line);
            active_list->push_back(line.substr(3));
            continue;
        }

        Section& section = thought.sections_[static_cast<std::size_t>(current_section)];
        if (line.rfind("The points in ", 0) == 0) {
            const std::string peer_marker = "'s opinion on the topic of ";
            auto peer_end = line.find(peer_marker);
            require(peer_end != std::string::npos, Errc::parse_error,
                    "malformed peer lead-in: " + line);
            std::string peer = line.substr(14, peer_end - 14);
            auto& assessment = section.assessments[peer];
            assessment.peer_id = peer;
            if (line == agree_lead_in(peer, current_section)) {
                active_list = &assessment.agree_or_interesting;
            } else if (line == contra_lead_in(peer, current_section)) {
                active_list = &assessment.contradictory_or_missing;
            } else {
                fail(Errc::parse_error, "unrecognized peer lead-in: " + line);
            }
            continue;
        }

        // Must be the section lead-in; recover the source domain from it once.
        if (!source_known) {
            if (current_section == 0) {
                const std::string prefix = "The functional similarities between the target domain and the ";
                require(line.rfind(prefix, 0) == 0 && line.back() == ':', Errc::parse_error,
                        "malformed section lead-in: " + line);
                thought.source_domain_ = line.substr(prefix.size(), line.size() - prefix.size() - 1);
                source_known = true;
            }
        }
        require(line == section_lead_in(current_section, thought.source_domain_), Errc::parse_error,
                "unrecognized line in section: " + line);
        active_list = &section.bullets;
    }
    require(current_section == kSectionCount - 1, Errc::parse_error,
            "thought text is missing sections");
    return thought;
}

}  // namespace aida
