#include "scripted_backend.hpp"

#include "prompts.hpp"
#include "util.hpp"

#include <array>
#include <sstream>
#include <string_view>

namespace aida {

namespace {

// splitmix64; gives well-mixed deterministic streams from a digest seed
// without depending on distribution implementations.
struct Mixer {
    std::uint64_t state;

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

constexpr std::array<std::string_view, 48> kLexicon = {
    "airflow",    "pressure",   "nozzle",     "intake",      "housing",    "channel",
    "gradient",   "velocity",   "turbine",    "impeller",    "diffuser",   "duct",
    "stream",     "casing",     "vane",       "motor",       "suction",    "outlet",
    "chamber",    "circulation","efficiency", "turbulence",  "entrain",    "induce",
    "compact",    "quiet",      "enclosed",   "directed",    "continuous", "stable",
    "narrow",     "annular",    "internal",   "external",    "drives",     "draws",
    "expels",     "guides",     "shapes",     "amplifies",   "reduces",    "balances",
    "the",        "a",          "this",       "which",       "while",      "therefore"};

std::string prose(Mixer& mix, int words) {
    std::ostringstream out;
    for (int i = 0; i < words; ++i) {
        if (i > 0) {
            out << ' ';
        }
        out << kLexicon[mix.below(kLexicon.size())];
        if (i % 11 == 10) {
            out << '.';
        }
    }
    out << '.';
    return out.str();
}

std::string last_user_content(const CompletionRequest& request) {
    for (auto it = request.messages.rbegin(); it != request.messages.rend(); ++it) {
        if (it->role == Role::user) {
            return it->content;
        }
    }
    return request.messages.back().content;
}

bool mentions(const std::string& text, const char* marker) {
    return text.find(marker) != std::string::npos;
}

int parse_requested_count(const std::string& text) {
    auto pos = text.find("Generate ");
    if (pos == std::string::npos) {
        return 3;
    }
    int value = 0;
    for (std::size_t i = pos + 9; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
        value = value * 10 + (text[i] - '0');
    }
    return value > 0 ? value : 3;
}

int parse_judge_max(const std::string& text) {
    auto pos = text.find("(maximum ");
    if (pos == std::string::npos) {
        return 1;
    }
    int value = 0;
    for (std::size_t i = pos + 9; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
        value = value * 10 + (text[i] - '0');
    }
    return value > 0 ? value : 1;
}

}  // namespace

CompletionResponse ScriptedBackend::complete(const CompletionRequest& request) {
    request.validate();
    const std::string user = last_user_content(request);
    Mixer mix{fnv1a(canonical_request(request))};

    std::string content;
    if (mentions(user, prompts::kIdeaMarker)) {
        const int k = parse_requested_count(user);
        std::ostringstream out;
        for (int i = 1; i <= k; ++i) {
            out << i << ". " << prose(mix, 10 + static_cast<int>(mix.below(8))) << '\n';
        }
        content = out.str();
    } else if (mentions(user, prompts::kScoreMarker)) {
        std::ostringstream out;
        out << "novelty: " << 1 + mix.below(10) << "\nimportance: " << 1 + mix.below(10)
            << "\nconsensus: " << 1 + mix.below(10);
        content = out.str();
    } else if (mentions(user, prompts::kCritiqueMarker)) {
        if (mix.below(3) == 0) {
            content = "NO ISSUES";
        } else {
            content = "The proposal leaves the " + std::string(kLexicon[mix.below(20)]) +
                      " pathway unspecified and mixes two incompatible power assumptions.";
        }
    } else if (mentions(user, prompts::kRevisionMarker)) {
        content = "Refined: " + prose(mix, 16 + static_cast<int>(mix.below(10)));
    } else if (mentions(user, prompts::kAssessMarker)) {
        std::ostringstream out;
        out << "AGREE OR INTERESTING:\n";
        const int agree = static_cast<int>(mix.below(3));
        for (int i = 0; i < agree; ++i) {
            out << "- " << prose(mix, 6 + static_cast<int>(mix.below(4))) << '\n';
        }
        out << "CONTRADICTORY OR MISSING:\n";
        const int contra = static_cast<int>(mix.below(2));
        for (int i = 0; i < contra; ++i) {
            out << "- " << prose(mix, 6 + static_cast<int>(mix.below(4))) << '\n';
        }
        content = out.str();
    } else if (mentions(user, prompts::kJudgeMarker)) {
        const int max_points = parse_judge_max(user);
        std::ostringstream out;
        out << "award: " << mix.below(static_cast<std::uint64_t>(max_points) + 1)
            << "\nrationale: " << prose(mix, 8);
        content = out.str();
    } else if (mentions(user, prompts::kReactionMarker)) {
        content = prose(mix, 30 + static_cast<int>(mix.below(40)));
    } else {
        content = prose(mix, 120 + static_cast<int>(mix.below(120)));
    }

    CompletionResponse response;
    response.content = std::move(content);
    response.prompt_tokens = count_words(user);
    response.completion_tokens = count_words(response.content);
    return response;
}

}  // namespace aida
