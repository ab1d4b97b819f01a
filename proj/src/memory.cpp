#include "memory.hpp"

#include "errors.hpp"
#include "util.hpp"

#include <algorithm>
#include <sstream>

namespace aida {

const char* to_string(RecordKind kind) {
    switch (kind) {
        case RecordKind::document_review: return "document_review";
        case RecordKind::conversation_turn: return "conversation_turn";
        case RecordKind::reflection: return "reflection";
    }
    return "?";
}

std::string StructuredMemory::to_text() const {
    std::ostringstream out;
    out << "=== Reviewed documents ===\n";
    for (const auto& entry : document_section) {
        out << entry << "\n\n";
    }
    out << "=== Conversation so far ===\n";
    for (const auto& entry : conversation_section) {
        out << entry << '\n';
    }
    out << "=== Prior reflections ===\n";
    for (const auto& entry : reflection_section) {
        out << entry << '\n';
    }
    return out.str();
}

std::string StructuredMemory::conversation_text() const {
    std::ostringstream out;
    for (const auto& entry : conversation_section) {
        out << entry << '\n';
    }
    return out.str();
}

std::uint64_t MemoryStore::append(MemoryRecord record) {
    if (!records_.empty()) {
        require(record.timestamp > records_.back().timestamp, Errc::clock_violation,
                "timestamp " + std::to_string(record.timestamp) +
                    " not greater than last stored " +
                    std::to_string(records_.back().timestamp));
    }
    if (record.kind == RecordKind::document_review) {
        require(record.author == "self", Errc::precondition,
                "document_review records are authored by self");
    }
    record.record_id = next_id_++;
    records_.push_back(std::move(record));
    return records_.back().record_id;
}

const MemoryRecord* MemoryStore::by_id(std::uint64_t record_id) const {
    for (const auto& record : records_) {
        if (record.record_id == record_id) {
            return &record;
        }
    }
    return nullptr;
}

std::vector<MemoryRecord> MemoryStore::by_kind(RecordKind kind) const {
    std::vector<MemoryRecord> out;
    std::copy_if(records_.begin(), records_.end(), std::back_inserter(out),
                 [kind](const MemoryRecord& r) { return r.kind == kind; });
    return out;
}

std::vector<MemoryRecord> MemoryStore::by_phase(Phase phase) const {
    std::vector<MemoryRecord> out;
    std::copy_if(records_.begin(), records_.end(), std::back_inserter(out),
                 [phase](const MemoryRecord& r) { return r.phase && *r.phase == phase; });
    return out;
}

StructuredMemory MemoryStore::assemble(int budget_words, Phase /*phase*/) const {
    require(budget_words > 0, Errc::precondition, "assembly budget must be positive");

    std::vector<const MemoryRecord*> documents;
    std::vector<const MemoryRecord*> others;  // conversation turns and reflections, merged
    for (const auto& record : records_) {
        (record.kind == RecordKind::document_review ? documents : others).push_back(&record);
    }

    auto cost = [](const MemoryRecord* r) { return count_words(r->content); };

    // Newest-first contiguous suffix of a chronological group that fits in
    // `budget`. Stops at the first record that does not fit, so no record is
    // skipped over (equivalent to take-last-k at word granularity).
    auto keep_suffix = [&](const std::vector<const MemoryRecord*>& group, int budget) {
        std::vector<const MemoryRecord*> kept;
        int used = 0;
        for (auto it = group.rbegin(); it != group.rend(); ++it) {
            const int words = cost(*it);
            if (used + words > budget) {
                break;
            }
            used += words;
            kept.push_back(*it);
        }
        std::reverse(kept.begin(), kept.end());
        return std::pair(kept, used);
    };

    int documents_total = 0;
    for (const auto* doc : documents) {
        documents_total += cost(doc);
    }

    std::vector<const MemoryRecord*> kept_documents;
    std::vector<const MemoryRecord*> kept_others;
    int used = 0;
    if (documents_total <= budget_words) {
        kept_documents = documents;
        used = documents_total;
        auto [others_kept, others_used] = keep_suffix(others, budget_words - documents_total);
        kept_others = std::move(others_kept);
        used += others_used;
    } else {
        auto [docs_kept, docs_used] = keep_suffix(documents, budget_words);
        kept_documents = std::move(docs_kept);
        used = docs_used;
    }

    if (!records_.empty() && kept_documents.empty() && kept_others.empty()) {
        fail(Errc::budget_too_small,
             "budget of " + std::to_string(budget_words) + " words fits no record");
    }

    StructuredMemory assembled;
    for (const auto* doc : kept_documents) {
        assembled.document_section.push_back(doc->content);
    }
    for (const auto* record : kept_others) {
        auto& section = record->kind == RecordKind::conversation_turn
                            ? assembled.conversation_section
                            : assembled.reflection_section;
        section.push_back(record->content);
    }
    assembled.total_word_estimate = used;
    return assembled;
}

}  // namespace aida
