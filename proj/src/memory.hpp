#pragma once

#include "phase.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace aida {

enum class RecordKind { document_review, conversation_turn, reflection };

const char* to_string(RecordKind kind);

/// One timestamped unit of experience. Timestamps come from the run's
/// shared logical clock and must strictly increase within a store.
struct MemoryRecord {
    std::uint64_t record_id = 0;  // assigned by the store on append
    std::uint64_t timestamp = 0;
    RecordKind kind = RecordKind::conversation_turn;
    std::string author;  // agent id, "self", or "facilitator"
    std::optional<Phase> phase;
    std::string content;
};

/// The three-section view fed to reflection and statement prompts.
struct StructuredMemory {
    std::vector<std::string> document_section;
    std::vector<std::string> conversation_section;
    std::vector<std::string> reflection_section;
    int total_word_estimate = 0;

    std::string to_text() const;
    std::string conversation_text() const;
};

class MemoryStore {
public:
    /// Throws Errc::clock_violation unless record.timestamp is strictly
    /// greater than every timestamp already stored. Returns the record id.
    std::uint64_t append(MemoryRecord record);

    const std::vector<MemoryRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    const MemoryRecord* by_id(std::uint64_t record_id) const;
    std::vector<MemoryRecord> by_kind(RecordKind kind) const;
    std::vector<MemoryRecord> by_phase(Phase phase) const;

    /// Budgeted three-section assembly. Within the budget everything is
    /// kept; over it, conversation/reflection records are evicted oldest
    /// first (documents are the analogical ground truth and go last, again
    /// oldest first). Records are never split: eviction keeps a contiguous
    /// newest-first suffix of each group. Throws Errc::budget_too_small if
    /// a non-empty store yields an empty assembly.
    StructuredMemory assemble(int budget_words, Phase phase) const;

private:
    std::vector<MemoryRecord> records_;
    std::uint64_t next_id_ = 1;
};

}  // namespace aida
