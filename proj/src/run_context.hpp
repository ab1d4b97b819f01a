#pragma once

#include "transcript.hpp"

#include <cstdint>

namespace aida {

/// Monotonic logical clock shared by every participant of one run; a single
/// event sequence keeps memories and transcript events totally ordered
/// without wall-clock nondeterminism.
class RunClock {
public:
    std::uint64_t next() { return ++now_; }
    std::uint64_t current() const { return now_; }

private:
    std::uint64_t now_ = 0;
};

/// Where agents and the facilitator hand their events; the owner stamps
/// run identity and the clock tick.
class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void emit(TranscriptEvent event) = 0;
};

}  // namespace aida
