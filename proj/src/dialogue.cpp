#include "dialogue.hpp"

#include "errors.hpp"
#include "prompts.hpp"
#include "util.hpp"

#include <sstream>

namespace aida {

DialogueConfig::DialogueConfig() {
    for (Phase phase : kDiscussionPhases) {
        rounds_per_phase[phase] = 2;
    }
}

int DialogueConfig::rounds(Phase phase) const {
    require(phase != Phase::Preparation, Errc::precondition,
            "Preparation is per-document, not per-round");
    auto it = rounds_per_phase.find(phase);
    require(it != rounds_per_phase.end() && it->second >= 1, Errc::config_error,
            "rounds_per_phase missing or < 1 for phase " + std::string(to_string(phase)));
    return it->second;
}

std::string render_prompt(Phase phase, const std::map<std::string, std::string>& vars) {
    return prompts::phase_opening(phase, vars);
}

DialogueOrchestrator::DialogueOrchestrator(std::vector<std::unique_ptr<Agent>>& agents,
                                           OrgGraph graph, Corpus corpus, DialogueConfig config,
                                           Transcript::Header header, RunClock& clock)
    : agents_(agents),
      graph_(std::move(graph)),
      corpus_(std::move(corpus)),
      config_(std::move(config)),
      transcript_(std::move(header)),
      clock_(clock) {
    require(!agents_.empty(), Errc::precondition, "a dialogue needs at least one agent");
    bool has_target = false;
    bool has_source = false;
    for (const auto& doc : corpus_.documents) {
        (doc.role == DomainRole::target ? has_target : has_source) = true;
    }
    require(has_target && has_source, Errc::precondition,
            "corpus must provide target- and source-domain documents");
    for (const auto& agent : agents_) {
        agent->set_event_sink(this);
    }
}

void DialogueOrchestrator::emit(TranscriptEvent event) {
    event.run_id = transcript_.header().run_id;
    event.seed = transcript_.header().seed;
    event.timestamp = clock_.next();
    transcript_.append(std::move(event));
}

void DialogueOrchestrator::broadcast(const Statement& statement) {
    for (const auto& agent : agents_) {
        if (agent->id() == statement.agent_id) {
            continue;
        }
        if (graph_.can_communicate(statement.agent_id, agent->id())) {
            agent->observe(statement, graph_);
        }
    }
}

std::string DialogueOrchestrator::opening_prompt(Phase phase) const {
    std::map<std::string, std::string> vars = {
        {"target", corpus_.target_domain},
        {"source", corpus_.source_domain},
        {"limit", std::to_string(agents_.front()->config().statement_word_limit)},
    };
    if (phase == Phase::A) {
        std::ostringstream documents;
        for (const auto& doc : corpus_.documents) {
            documents << document_text(doc) << "\n\n";
        }
        vars["documents"] = documents.str();
    }
    return render_prompt(phase, vars);
}

void DialogueOrchestrator::run_preparation() {
    require(next_phase_ == 0, Errc::precondition, "Preparation has already run");
    try {
        for (const auto& agent : agents_) {
            for (const auto& doc : corpus_.documents) {
                TranscriptEvent event;
                event.phase = Phase::Preparation;
                event.round = 0;
                event.kind = EventKind::document_assigned;
                event.agent_id = agent->id();
                event.payload = {{"doc_id", doc.doc_id}, {"title", doc.title}};
                emit(std::move(event));
                agent->review_document(doc);
            }
            agent->finish_preparation();
        }
    } catch (const Error& ex) {
        TranscriptEvent event;
        event.phase = Phase::Preparation;
        event.kind = EventKind::error;
        event.agent_id = "facilitator";
        event.payload = {{"message", ex.what()}, {"fatal", true}};
        emit(std::move(event));
        throw;
    }
    next_phase_ = 1;
}

void DialogueOrchestrator::run_phase(Phase phase) {
    require(phase != Phase::Preparation, Errc::precondition,
            "run_phase drives discussion phases; use run_preparation first");
    require(static_cast<int>(phase) == next_phase_, Errc::precondition,
            std::string("phase ") + to_string(phase) + " run before its predecessor completed");
    for (const auto& agent : agents_) {
        require(agent->preparation_done(), Errc::precondition,
                agent->id() + " has not completed Preparation");
    }

    const int rounds = config_.rounds(phase);
    const std::size_t n = agents_.size();
    try {
        for (int round = 1; round <= rounds; ++round) {
            const std::string prompt =
                round == 1 ? opening_prompt(phase)
                           : prompts::phase_continuation(
                                 {{"limit", std::to_string(
                                       agents_.front()->config().statement_word_limit)}});
            TranscriptEvent prompt_event;
            prompt_event.phase = phase;
            prompt_event.round = round;
            prompt_event.kind = EventKind::prompt_issued;
            prompt_event.agent_id = "facilitator";
            prompt_event.payload = {{"text", prompt}};
            emit(std::move(prompt_event));
            for (const auto& agent : agents_) {
                agent->observe_prompt(prompt, phase, round);
            }

            std::vector<Statement> statements;
            statements.reserve(n);
            for (const auto& agent : agents_) {
                Statement statement = agent->make_statement(phase, round, prompt);
                TranscriptEvent event;
                event.phase = phase;
                event.round = round;
                event.kind = EventKind::statement;
                event.agent_id = statement.agent_id;
                event.payload = {{"text", statement.text},
                                 {"kind", "opinion"},
                                 {"addressed_to", statement.addressed_to},
                                 {"words", count_words(statement.text)}};
                emit(std::move(event));
                broadcast(statement);
                statements.push_back(std::move(statement));
            }

            if (config_.reactions_enabled && n > 1) {
                for (std::size_t i = 0; i < n; ++i) {
                    // React to the nearest preceding speaker this agent could
                    // actually hear; skip if the graph allows none.
                    const Statement* target = nullptr;
                    for (std::size_t offset = 1; offset < n && target == nullptr; ++offset) {
                        const Statement& candidate = statements[(i + n - offset) % n];
                        if (graph_.can_communicate(candidate.agent_id, agents_[i]->id())) {
                            target = &candidate;
                        }
                    }
                    if (target == nullptr) {
                        continue;
                    }
                    Statement reaction = agents_[i]->react_to(*target);
                    TranscriptEvent event;
                    event.phase = phase;
                    event.round = round;
                    event.kind = EventKind::reaction;
                    event.agent_id = reaction.agent_id;
                    event.payload = {{"text", reaction.text},
                                     {"kind", "reaction"},
                                     {"addressed_to", reaction.addressed_to},
                                     {"words", count_words(reaction.text)}};
                    emit(std::move(event));
                    broadcast(reaction);
                }
            }

            for (const auto& agent : agents_) {
                if (agent->has_internal_state()) {
                    agent->reflect(phase, round);
                }
            }
        }
    } catch (const Error& ex) {
        TranscriptEvent event;
        event.phase = phase;
        event.kind = EventKind::error;
        event.agent_id = "facilitator";
        event.payload = {{"message", ex.what()}, {"fatal", true}};
        emit(std::move(event));
        throw;
    }
    ++next_phase_;
}

Transcript DialogueOrchestrator::run_all() {
    try {
        run_preparation();
        for (Phase phase : kDiscussionPhases) {
            run_phase(phase);
        }
    } catch (const Error&) {
        // The fatal error event is already in the transcript; hand the
        // partial log back flagged invalid instead of losing it.
    }
    return transcript_;
}

}  // namespace aida
