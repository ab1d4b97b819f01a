#include "agent.hpp"

#include "errors.hpp"
#include "prompts.hpp"
#include "util.hpp"

#include <algorithm>

namespace aida {

namespace {

// Reactions assess the peer against the recent exchange, not the whole run;
// the reacting agent has just observed the peer, so the window always
// contains at least that statement.
constexpr std::size_t kRecentConversationWindow = 12;

}  // namespace

Agent::Agent(AgentConfig config, Backend& backend, LlmProfile profile, RunClock& clock,
             std::string target_domain, std::string source_domain)
    : config_(std::move(config)),
      backend_(backend),
      profile_(std::move(profile)),
      clock_(clock),
      target_domain_(std::move(target_domain)),
      source_domain_(std::move(source_domain)),
      thought_(source_domain_) {
    require(!config_.agent_id.empty(), Errc::precondition, "agent id must not be empty");
    require(config_.statement_word_limit > 0 && config_.reaction_word_limit > 0,
            Errc::precondition, "word limits must be positive");
    system_prompt_ = prompts::agent_system(config_.agent_id, config_.persona);
    if (config_.has_internal_state) {
        internal_.emplace(backend_, config_.weights, profile_.model_id, profile_.temperature,
                          profile_.seed, profile_.max_tokens);
    }
}

void Agent::emit(EventKind kind, Phase phase, int round, nlohmann::json payload) {
    if (sink_ == nullptr) {
        return;
    }
    TranscriptEvent event;
    event.phase = phase;
    event.round = round;
    event.kind = kind;
    event.agent_id = config_.agent_id;
    event.payload = std::move(payload);
    sink_->emit(std::move(event));
}

void Agent::remember_turn(const std::string& author, Phase phase, const std::string& text) {
    MemoryRecord record;
    record.timestamp = clock_.next();
    record.kind = RecordKind::conversation_turn;
    record.author = author;
    record.phase = phase;
    record.content = author + ": " + text;
    memory_.append(std::move(record));
}

std::string Agent::phase_topic(Phase phase) const {
    switch (phase) {
        case Phase::A:
            return "the functional similarities between " + target_domain_ + " and " +
                   source_domain_;
        case Phase::B:
            return "the mechanical differences between " + target_domain_ + " and " +
                   source_domain_;
        case Phase::C:
            return "solutions transferred from " + source_domain_ + " to " + target_domain_;
        case Phase::D:
            return "new challenges arising from applying " + source_domain_ + " mechanisms to " +
                   target_domain_;
        case Phase::E:
            return "new opportunities created by applying " + source_domain_ + " mechanisms to " +
                   target_domain_;
        case Phase::Preparation:
            break;
    }
    fail(Errc::precondition, "no discussion topic for Preparation");
}

std::vector<Idea> Agent::run_idea_pipeline(Phase phase, int round, const std::string& topic) {
    const StructuredMemory assembled = memory_.assemble(config_.assembly_budget_words, phase);
    std::vector<Idea> ideas = internal_->generate_ideas(assembled, thought_, topic,
                                                        config_.ideas_per_generation,
                                                        system_prompt_);
    for (auto& idea : ideas) {
        idea.scores = internal_->score_idea(idea, assembled, thought_, system_prompt_);
        emit(EventKind::idea_scored, phase, round,
             {{"idea", idea.text},
              {"topic", idea.topic},
              {"novelty", idea.scores->novelty},
              {"importance", idea.scores->importance},
              {"consensus", idea.scores->consensus},
              {"reward", intrinsic_reward(*idea.scores, config_.weights)}});
    }

    // Top-m by reward, ties to the lower index; m = 1 unless configured.
    std::vector<std::size_t> order(ideas.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return intrinsic_reward(*ideas[a].scores, config_.weights) >
               intrinsic_reward(*ideas[b].scores, config_.weights);
    });
    const std::size_t take =
        std::min<std::size_t>(std::max(config_.top_m_ideas, 1), order.size());

    std::vector<Idea> refined;
    refined.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        refined.push_back(internal_->introspect(ideas[order[i]], system_prompt_));
    }
    return refined;
}

void Agent::review_document(const TechnicalDocument& document) {
    require(!trim(document.body).empty(), Errc::precondition, "document body is empty");

    MemoryRecord record;
    record.timestamp = clock_.next();
    record.kind = RecordKind::document_review;
    record.author = "self";
    record.phase = Phase::Preparation;
    record.content = document_text(document);
    memory_.append(std::move(record));

    if (!internal_) {
        return;
    }
    auto refined = run_idea_pipeline(Phase::Preparation, 0,
                                     "the document '" + document.title + "'");
    for (const auto& idea : refined) {
        MemoryRecord reflection;
        reflection.timestamp = clock_.next();
        reflection.kind = RecordKind::reflection;
        reflection.author = "self";
        reflection.phase = Phase::Preparation;
        reflection.content = idea.text;
        memory_.append(std::move(reflection));
    }
}

CompletionRequest Agent::build_statement_request(Phase phase,
                                                 const std::string& facilitator_prompt) const {
    const StructuredMemory assembled = memory_.assemble(config_.assembly_budget_words, phase);
    const std::string thought_text = internal_ ? thought_.to_text() : std::string();

    CompletionRequest request;
    request.model_id = profile_.model_id;
    request.temperature = profile_.temperature;
    request.seed = profile_.seed;
    request.max_tokens = profile_.max_tokens;
    request.messages.push_back({Role::system, system_prompt_});
    request.messages.push_back(
        {Role::user, prompts::statement_context(assembled.to_text(), thought_text,
                                                facilitator_prompt)});
    return request;
}

Statement Agent::make_statement(Phase phase, int round, const std::string& facilitator_prompt) {
    require(preparation_done_, Errc::precondition,
            config_.agent_id + " has not completed Preparation");

    const CompletionRequest request = build_statement_request(phase, facilitator_prompt);
    const CompletionResponse response = backend_.complete(request);

    Statement statement;
    statement.agent_id = config_.agent_id;
    statement.phase = phase;
    statement.round = round;
    statement.kind = Statement::Kind::opinion;
    statement.addressed_to = "all";
    statement.text = truncate_words(response.content, config_.statement_word_limit);
    statement.timestamp = clock_.next();
    remember_turn(config_.agent_id, phase, statement.text);
    return statement;
}

Statement Agent::react_to(const Statement& peer_statement) {
    require(peer_statement.agent_id != config_.agent_id, Errc::precondition,
            "an agent cannot react to its own statement");

    CompletionRequest request;
    request.model_id = profile_.model_id;
    request.temperature = profile_.temperature;
    request.seed = profile_.seed;
    request.max_tokens = profile_.max_tokens;
    request.messages.push_back({Role::system, system_prompt_});
    request.messages.push_back(
        {Role::user, prompts::reaction(peer_statement.agent_id, peer_statement.text,
                                       config_.reaction_word_limit)});
    const CompletionResponse response = backend_.complete(request);

    Statement reaction;
    reaction.agent_id = config_.agent_id;
    reaction.phase = peer_statement.phase;
    reaction.round = peer_statement.round;
    reaction.kind = Statement::Kind::reaction;
    reaction.addressed_to = peer_statement.agent_id;
    reaction.text = truncate_words(response.content, config_.reaction_word_limit);
    reaction.timestamp = clock_.next();
    remember_turn(config_.agent_id, reaction.phase, reaction.text);

    if (internal_ && peer_statement.phase != Phase::Preparation) {
        auto recent = memory_.by_kind(RecordKind::conversation_turn);
        if (recent.size() > kRecentConversationWindow) {
            recent.erase(recent.begin(),
                         recent.end() - static_cast<std::ptrdiff_t>(kRecentConversationWindow));
        }
        PeerAssessment assessment =
            internal_->assess_peer(thought_, recent, peer_statement.agent_id, system_prompt_);
        thought_ = internal_->merge_assessments(thought_, {assessment}, peer_statement.phase,
                                                clock_.current());
    }
    return reaction;
}

void Agent::observe(const Statement& statement, const OrgGraph& graph) {
    if (statement.agent_id != "facilitator") {
        require(graph.can_communicate(statement.agent_id, config_.agent_id),
                Errc::topology_violation,
                statement.agent_id + " is not adjacent to " + config_.agent_id);
    }
    remember_turn(statement.agent_id, statement.phase, statement.text);
}

void Agent::observe_prompt(const std::string& prompt_text, Phase phase, int /*round*/) {
    remember_turn("facilitator", phase, prompt_text);
}

void Agent::reflect(Phase phase, int round) {
    require(internal_.has_value(), Errc::precondition,
            config_.agent_id + " has no internal state to reflect with");
    require(phase != Phase::Preparation, Errc::precondition,
            "round reflection only applies to discussion phases");

    auto refined = run_idea_pipeline(phase, round, phase_topic(phase));
    for (const auto& idea : refined) {
        thought_ = internal_->merge_into_thought(thought_, idea, {}, phase, clock_.current());
        MemoryRecord reflection;
        reflection.timestamp = clock_.next();
        reflection.kind = RecordKind::reflection;
        reflection.author = "self";
        reflection.phase = phase;
        reflection.content = idea.text;
        memory_.append(std::move(reflection));
    }
    emit(EventKind::thought_updated, phase, round, {{"thought", thought_.to_text()}});
}

}  // namespace aida
