#pragma once

#include "agent.hpp"
#include "corpus.hpp"
#include "organization.hpp"
#include "run_context.hpp"
#include "transcript.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace aida {

struct DialogueConfig {
    std::map<Phase, int> rounds_per_phase;  // discussion phases only
    bool reactions_enabled = true;
    std::int64_t seed = 0;

    DialogueConfig();
    int rounds(Phase phase) const;
};

/// Opening facilitator prompt of a phase with domain names (and, for the
/// first phase, the documents) substituted in. Throws Errc::missing_variable
/// when a placeholder has no binding.
std::string render_prompt(Phase phase, const std::map<std::string, std::string>& vars);

/// Drives one full run: Preparation, then the five discussion phases in
/// order, appending every action to the transcript. Strictly sequential;
/// one orchestrator per run.
class DialogueOrchestrator : public EventSink {
public:
    DialogueOrchestrator(std::vector<std::unique_ptr<Agent>>& agents, OrgGraph graph,
                         Corpus corpus, DialogueConfig config, Transcript::Header header,
                         RunClock& clock);

    /// Every agent reviews every document.
    void run_preparation();

    /// One phase: per round, a facilitator prompt, one opinion statement per
    /// agent in index order (broadcast to graph out-neighbors), optional
    /// reactions, and a round-end reflection for internal-state agents.
    /// Phases must be run in order, after Preparation.
    void run_phase(Phase phase);

    /// Preparation plus Phases A-E. Backend failures abort the run: the
    /// partial transcript gains a fatal error event and is returned invalid.
    Transcript run_all();

    const Transcript& transcript() const { return transcript_; }

    void emit(TranscriptEvent event) override;

private:
    void broadcast(const Statement& statement);
    std::string opening_prompt(Phase phase) const;

    std::vector<std::unique_ptr<Agent>>& agents_;
    OrgGraph graph_;
    Corpus corpus_;
    DialogueConfig config_;
    Transcript transcript_;
    RunClock& clock_;
    int next_phase_ = 0;  // index into Preparation,A..E
};

}  // namespace aida
