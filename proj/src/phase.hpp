#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace aida {

/// Dialogue stages, totally ordered: Preparation < A < B < C < D < E.
enum class Phase {
    Preparation = 0,
    A = 1,
    B = 2,
    C = 3,
    D = 4,
    E = 5,
};

constexpr bool operator<(Phase lhs, Phase rhs) {
    return static_cast<int>(lhs) < static_cast<int>(rhs);
}

inline constexpr Phase kDiscussionPhases[] = {Phase::A, Phase::B, Phase::C, Phase::D, Phase::E};

const char* to_string(Phase phase);
std::optional<Phase> phase_from_string(std::string_view name);

/// Index 0..4 of the thought section a discussion phase feeds (A -> a, ..., E -> e).
/// Preparation has no section.
int section_index(Phase phase);

}  // namespace aida
