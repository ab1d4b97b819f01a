#pragma once

#include "backend.hpp"
#include "memory.hpp"
#include "thought.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace aida {

/// Per-agent emphasis on the three idea criteria. All weights are
/// non-negative and at least one is strictly positive.
struct MotivationWeights {
    double novelty = 1.0;     // alpha
    double importance = 1.0;  // beta
    double consensus = 1.0;   // gamma

    void validate() const;
};

/// 1-10 ratings of one idea on the three criteria.
struct IdeaScores {
    int novelty = 1;
    int importance = 1;
    int consensus = 1;

    bool operator==(const IdeaScores&) const = default;
};

struct Idea {
    std::string text;
    std::string topic;  // the object the idea is about
    std::optional<IdeaScores> scores;
    bool refined = false;
    std::vector<std::string> notes;  // introspection trail
};

/// Weighted sum of the three criterion scores under the given weights.
double intrinsic_reward(const IdeaScores& scores, const MotivationWeights& weights);

/// Index of the idea with the highest intrinsic reward; ties break to the
/// lowest index. All ideas must be scored. Throws Errc::empty_list on an
/// empty list.
std::size_t select_idea_index(const std::vector<Idea>& ideas, const MotivationWeights& weights);
const Idea& select_idea(const std::vector<Idea>& ideas, const MotivationWeights& weights);

/// Merges a refined idea and any peer assessments into the thought section
/// belonging to `phase` (A->a .. E->e); other sections are untouched.
/// Newest assessment per peer per section replaces the old; last_updated is
/// set to `now`. Pure: returns a new value.
CurrentThought update_thought(const CurrentThought& thought, const Idea& refined_idea,
                              const std::vector<PeerAssessment>& assessments, Phase phase,
                              std::uint64_t now);

/// Assessment-only variant: folds peer assessments into the phase's section
/// without touching its bullets.
CurrentThought update_thought(const CurrentThought& thought,
                              const std::vector<PeerAssessment>& assessments, Phase phase,
                              std::uint64_t now);

/// LLM-backed idea pipeline of one agent: generation, scoring, introspection
/// and peer assessment. Each public call bumps an op counter so ablation
/// tests can verify internal-state-free agents never touch it.
class InternalState {
public:
    InternalState(Backend& backend, MotivationWeights weights, std::string model_id,
                  double temperature, std::int64_t seed, int max_tokens);

    const MotivationWeights& weights() const { return weights_; }
    std::uint64_t ops_performed() const { return ops_; }

    /// Asks for up to k ideas and parses the numbered list; keeps the first
    /// k. One stricter-format retry, then Errc::parse_error.
    std::vector<Idea> generate_ideas(const StructuredMemory& memory, const CurrentThought& thought,
                                     const std::string& topic, int k,
                                     const std::string& system_prompt);

    /// Scores one unscored idea; out-of-range values are clamped into [1,10]
    /// with a warning. One retry, then Errc::parse_error.
    IdeaScores score_idea(const Idea& idea, const StructuredMemory& memory,
                          const CurrentThought& thought, const std::string& system_prompt);

    /// Critique-then-revise. If the critique reports no issues the text
    /// passes through unchanged; either way the critique joins the idea's
    /// note trail and the result is marked refined.
    Idea introspect(Idea idea, const std::string& system_prompt);

    /// Distills agreement and contradiction bullets about one peer from the
    /// recent conversation. Throws Errc::no_peer_statements if the peer has
    /// no conversation turn in `recent_conversation`.
    PeerAssessment assess_peer(const CurrentThought& thought,
                               const std::vector<MemoryRecord>& recent_conversation,
                               const std::string& peer_id, const std::string& system_prompt);

    std::size_t select(const std::vector<Idea>& ideas);
    CurrentThought merge_into_thought(const CurrentThought& thought, const Idea& refined_idea,
                                      const std::vector<PeerAssessment>& assessments, Phase phase,
                                      std::uint64_t now);
    CurrentThought merge_assessments(const CurrentThought& thought,
                                     const std::vector<PeerAssessment>& assessments, Phase phase,
                                     std::uint64_t now);

private:
    CompletionRequest make_request(const std::string& system_prompt,
                                   const std::string& user_prompt) const;

    Backend& backend_;
    MotivationWeights weights_;
    std::string model_id_;
    double temperature_;
    std::int64_t seed_;
    int max_tokens_;
    std::uint64_t ops_ = 0;
};

/// Parsing helpers, exposed for tests.
std::vector<std::string> parse_numbered_list(const std::string& text);
std::optional<IdeaScores> parse_scores(const std::string& text);
PeerAssessment parse_assessment(const std::string& text, const std::string& peer_id);

}  // namespace aida
