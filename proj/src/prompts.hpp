#pragma once

#include "phase.hpp"

#include <map>
#include <string>

namespace aida {

/// Replaces every {name} placeholder in `text` with vars.at(name).
/// Throws Errc::missing_variable if a placeholder has no binding.
std::string render_template(const std::string& text, const std::map<std::string, std::string>& vars);

namespace prompts {

/// Facilitator opening prompt for a discussion phase. Vars: target, source,
/// limit, and (Phase A only) documents.
std::string phase_opening(Phase phase, const std::map<std::string, std::string>& vars);

/// Facilitator prompt for rounds >= 2 of any phase. Vars: limit.
std::string phase_continuation(const std::map<std::string, std::string>& vars);

/// Per-agent system prompt. Always carries the clause forbidding outside
/// knowledge; persona may be empty.
std::string agent_system(const std::string& agent_id, const std::string& persona);

std::string idea_generation(const std::string& memory_text, const std::string& thought_text,
                            const std::string& topic, int k);
std::string idea_generation_retry(int k);

std::string idea_scoring(const std::string& conversation_text, const std::string& thought_text,
                         const std::string& idea_text);
std::string idea_scoring_retry();

std::string critique(const std::string& idea_text);
std::string revision(const std::string& idea_text, const std::string& critique_text);

std::string peer_assessment(const std::string& peer_id, const std::string& peer_statements,
                            const std::string& thought_text);

std::string statement_context(const std::string& memory_text, const std::string& thought_text,
                              const std::string& facilitator_prompt);

std::string reaction(const std::string& peer_id, const std::string& statement_text, int limit);

std::string judge_system();
std::string judge_criterion(int criterion_id, const std::string& description, int max_points,
                            const std::string& agent_id, const std::string& solution_text);

/// Marker substrings the scripted backend uses to classify requests.
/// They are fragments of the templates above; keep the two in sync.
inline constexpr const char* kIdeaMarker = "Return them as a numbered list";
inline constexpr const char* kScoreMarker = "Reply with exactly three lines";
inline constexpr const char* kCritiqueMarker = "identify any technical ambiguities or contradictions";
inline constexpr const char* kRevisionMarker = "Rewrite the idea to address the issues";
inline constexpr const char* kAssessMarker = "AGREE OR INTERESTING";
inline constexpr const char* kReactionMarker = "Here is the most recent statement by";
inline constexpr const char* kJudgeMarker = "Reply with a line 'award:";

}  // namespace prompts

}  // namespace aida
