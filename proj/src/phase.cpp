#include "phase.hpp"

#include "errors.hpp"

namespace aida {

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::Preparation: return "Preparation";
        case Phase::A: return "A";
        case Phase::B: return "B";
        case Phase::C: return "C";
        case Phase::D: return "D";
        case Phase::E: return "E";
    }
    return "?";
}

std::optional<Phase> phase_from_string(std::string_view name) {
    if (name == "Preparation") return Phase::Preparation;
    if (name == "A") return Phase::A;
    if (name == "B") return Phase::B;
    if (name == "C") return Phase::C;
    if (name == "D") return Phase::D;
    if (name == "E") return Phase::E;
    return std::nullopt;
}

int section_index(Phase phase) {
    require(phase != Phase::Preparation, Errc::precondition,
            "Preparation does not map to a thought section");
    return static_cast<int>(phase) - 1;
}

}  // namespace aida
