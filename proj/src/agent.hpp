#pragma once

#include "backend.hpp"
#include "corpus.hpp"
#include "internal_state.hpp"
#include "memory.hpp"
#include "organization.hpp"
#include "run_context.hpp"
#include "thought.hpp"

#include <memory>
#include <optional>
#include <string>

namespace aida {

struct AgentConfig {
    std::string agent_id;
    bool has_internal_state = false;
    MotivationWeights weights;  // ignored when has_internal_state is false
    int statement_word_limit = 170;
    int reaction_word_limit = 50;
    std::string persona;  // optional; prepended to the system prompt
    int ideas_per_generation = 3;
    int top_m_ideas = 1;  // refined ideas merged into the thought per reflection
    int assembly_budget_words = 3000;
};

struct Statement {
    std::string agent_id;
    Phase phase = Phase::A;
    int round = 1;
    enum class Kind { opinion, reaction } kind = Kind::opinion;
    std::string addressed_to;  // agent id or "all"
    std::string text;
    std::uint64_t timestamp = 0;
};

struct LlmProfile {
    std::string model_id;
    double temperature = 0.7;
    std::int64_t seed = 0;
    int max_tokens = 1024;
};

/// A conversational participant: memory plus, when configured, the
/// idea-refinement internal state. Confined to its run's orchestration
/// thread; all timestamps come from the shared run clock.
class Agent {
public:
    Agent(AgentConfig config, Backend& backend, LlmProfile profile, RunClock& clock,
          std::string target_domain, std::string source_domain);

    const AgentConfig& config() const { return config_; }
    const std::string& id() const { return config_.agent_id; }
    bool has_internal_state() const { return internal_.has_value(); }
    const MemoryStore& memory() const { return memory_; }
    const CurrentThought& thought() const { return thought_; }
    std::uint64_t internal_op_count() const { return internal_ ? internal_->ops_performed() : 0; }

    void set_event_sink(EventSink* sink) { sink_ = sink; }

    /// Stores the document; internal-state agents additionally run one
    /// reflection pass over it (generate, score, select, introspect) and
    /// store the refined idea.
    void review_document(const TechnicalDocument& document);

    bool preparation_done() const { return preparation_done_; }
    void finish_preparation() { preparation_done_ = true; }

    /// Produces this round's opinion. The completion context is the
    /// assembled memory plus, for internal-state agents, the thought
    /// document; the result is hard-truncated at a word boundary.
    Statement make_statement(Phase phase, int round, const std::string& facilitator_prompt);

    /// <= reaction_word_limit words about one peer statement; internal-state
    /// agents also assess the peer and fold the assessment into the thought.
    Statement react_to(const Statement& peer_statement);

    /// Records a peer or facilitator statement. The author must be a
    /// facilitator or an in-neighbor in the org graph.
    void observe(const Statement& statement, const OrgGraph& graph);
    void observe_prompt(const std::string& prompt_text, Phase phase, int round);

    /// Round-end reflection: generates, scores and refines ideas about the
    /// phase topic, then updates the thought section of that phase.
    /// Only valid on internal-state agents.
    void reflect(Phase phase, int round);

    /// Context assembly exposed for tests; mirrors make_statement exactly.
    CompletionRequest build_statement_request(Phase phase,
                                              const std::string& facilitator_prompt) const;

private:
    void emit(EventKind kind, Phase phase, int round, nlohmann::json payload);
    void remember_turn(const std::string& author, Phase phase, const std::string& text);
    std::string phase_topic(Phase phase) const;
    std::vector<Idea> run_idea_pipeline(Phase phase, int round, const std::string& topic);

    AgentConfig config_;
    Backend& backend_;
    LlmProfile profile_;
    RunClock& clock_;
    std::string target_domain_;
    std::string source_domain_;
    std::string system_prompt_;
    MemoryStore memory_;
    CurrentThought thought_;
    std::optional<InternalState> internal_;
    EventSink* sink_ = nullptr;
    bool preparation_done_ = false;
};

}  // namespace aida
