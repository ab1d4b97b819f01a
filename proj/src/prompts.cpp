#include "prompts.hpp"

#include "errors.hpp"

#include <sstream>

namespace aida {

std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t open = text.find('{', pos);
        if (open == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        out.append(text, pos, open - pos);
        std::size_t close = text.find('}', open);
        require(close != std::string::npos, Errc::missing_variable,
                "unterminated placeholder in template");
        std::string name = text.substr(open + 1, close - open - 1);
        auto it = vars.find(name);
        require(it != vars.end(), Errc::missing_variable, "no binding for placeholder {" + name + "}");
        out += it->second;
        pos = close + 1;
    }
    return out;
}

namespace prompts {

namespace {

// Facilitator openings, one per phase. The wording is the protocol;
// placeholders are filled per session.
const std::string kPhaseA =
    "Hello. The field of the product we are developing is referred to as the 'target domain,' "
    "and the field of reference products for development is referred to as the 'source domain.' "
    "The target domain for this session is {target}. The source domain is {source}. "
    "Read the following documents about the target domain and the source domain, and provide "
    "your thoughts on the core functional similarities between the two domains, starting with "
    "what you believe to be the most essential similarities. However, do not discuss the "
    "differences between the two domains, the challenges within each domain, their possible "
    "solutions yet. Please respond within {limit} words.\n\n{documents}";

const std::string kPhaseB =
    "Thank you. Next, please share your thoughts on how the mechanisms in the source domain "
    "that produce the common functionalities differ from those in the target domain, starting "
    "with the most significant differences. However, do not discuss the challenges within each "
    "domain or their solutions yet. Please respond within {limit} words.";

const std::string kPhaseC =
    "Thank you. Now, let's consider how applying the discussed differences in mechanisms to "
    "the target domain could help solve its challenges. Please share your thoughts on what "
    "aspects of the source domain's mechanisms should be adapted and how they should be "
    "integrated into the target domain to address the challenges in the target domain. "
    "Additionally, explain what functionalities or mechanisms of the target domain should be "
    "retained and what should be discarded, in order of importance, starting with the most "
    "critical points. Please respond within {limit} words.";

const std::string kPhaseD =
    "Thank you. Now, let's consider whether applying the source domain's mechanisms to the "
    "target domain in the manner discussed could lead to any unforeseen significant challenges. "
    "If you believe such challenges might arise, please share your thoughts, listing them in "
    "order of severity. If you do not believe any major challenges would arise, please state "
    "that as your answer. Please respond within {limit} words.";

const std::string kPhaseE =
    "Thank you. Now, let's consider the opposite perspective. Could applying the source "
    "domain's mechanisms to the target domain create additional opportunities beyond merely "
    "solving the target domain's existing challenges? If you believe such new opportunities "
    "exist, please share your thoughts, listing them in order of importance. If you do not "
    "believe any additional opportunities would be generated, please state that as your answer. "
    "Please respond within {limit} words.";

const std::string kContinuation =
    "Please continue the discussion on the current topic, responding to points raised by other "
    "participants where relevant and deepening the analysis. Please respond within {limit} words.";

}  // namespace

std::string phase_opening(Phase phase, const std::map<std::string, std::string>& vars) {
    switch (phase) {
        case Phase::A: return render_template(kPhaseA, vars);
        case Phase::B: return render_template(kPhaseB, vars);
        case Phase::C: return render_template(kPhaseC, vars);
        case Phase::D: return render_template(kPhaseD, vars);
        case Phase::E: return render_template(kPhaseE, vars);
        case Phase::Preparation: break;
    }
    fail(Errc::precondition, "no opening prompt for phase Preparation");
}

std::string phase_continuation(const std::map<std::string, std::string>& vars) {
    return render_template(kContinuation, vars);
}

std::string agent_system(const std::string& agent_id, const std::string& persona) {
    std::ostringstream out;
    out << "You are " << agent_id
        << ", an engineer participating in a facilitated product development discussion. ";
    if (!persona.empty()) {
        out << persona << ' ';
    }
    out << "You must not use pre-trained knowledge about existing commercial products or any "
           "information from outside this session. Base every statement and reflection strictly "
           "on logical conclusions or associations drawn from the documents you have reviewed, "
           "the discussion so far, and your own prior reflections.";
    return out.str();
}

std::string idea_generation(const std::string& memory_text, const std::string& thought_text,
                            const std::string& topic, int k) {
    std::ostringstream out;
    out << "Your structured memory:\n" << memory_text << "\n\n";
    if (!thought_text.empty()) {
        out << "Your current thought:\n" << thought_text << "\n\n";
    }
    out << "Generate " << k << " distinct ideas for reflection on " << topic
        << ". Return them as a numbered list (1., 2., ...), one idea per line, "
           "with no additional commentary.";
    return out.str();
}

std::string idea_generation_retry(int k) {
    std::ostringstream out;
    out << "Your previous reply could not be parsed. Reply again with exactly " << k
        << " lines, each starting with its number, a period and a space, and nothing else. "
        << "Return them as a numbered list (1., 2., ...).";
    return out.str();
}

std::string idea_scoring(const std::string& conversation_text, const std::string& thought_text,
                         const std::string& idea_text) {
    std::ostringstream out;
    out << "Recent conversation:\n"
        << (conversation_text.empty() ? "(none yet)" : conversation_text) << "\n\n";
    if (!thought_text.empty()) {
        out << "Your current thought:\n" << thought_text << "\n\n";
    }
    out << "Evaluate the following idea on a scale of 1 to 10 for each criterion. "
           "Novelty: the degree to which the idea introduces new content that has not been "
           "present in prior conversations and reflections. "
           "Importance: how significant the idea is in light of previous discussions and "
           "reflections. "
           "Consensus: the extent to which the idea aligns with the opinions of the majority "
           "of participants, based on past conversations.\n\n"
        << "Idea: " << idea_text << "\n\n"
        << "Reply with exactly three lines: 'novelty: <1-10>', 'importance: <1-10>', "
           "'consensus: <1-10>'.";
    return out.str();
}

std::string idea_scoring_retry() {
    return "Your previous reply could not be parsed. Reply with exactly three lines: "
           "'novelty: <1-10>', 'importance: <1-10>', 'consensus: <1-10>'.";
}

std::string critique(const std::string& idea_text) {
    return "Critically examine the following idea and identify any technical ambiguities or "
           "contradictions. If there are none, reply with exactly 'NO ISSUES'. Otherwise list "
           "the issues, one per line.\n\nIdea: " +
           idea_text;
}

std::string revision(const std::string& idea_text, const std::string& critique_text) {
    return "Rewrite the idea to address the issues below, improving clarity and coherence while "
           "keeping its core proposal. Reply with the revised idea only.\n\nIdea: " +
           idea_text + "\n\nIssues:\n" + critique_text;
}

std::string peer_assessment(const std::string& peer_id, const std::string& peer_statements,
                            const std::string& thought_text) {
    std::ostringstream out;
    out << "Recent statements by " << peer_id << ":\n" << peer_statements << "\n\n";
    if (!thought_text.empty()) {
        out << "Your current thought:\n" << thought_text << "\n\n";
    }
    out << "Identify the points in " << peer_id
        << "'s opinion that you agree with or find interesting, and the points that contain "
           "contradictions or missing information. Reply with two sections exactly: a line "
           "'AGREE OR INTERESTING:' followed by bullet lines starting with '- ', then a line "
           "'CONTRADICTORY OR MISSING:' followed by bullet lines starting with '- '. Either "
           "section may have no bullets.";
    return out.str();
}

std::string statement_context(const std::string& memory_text, const std::string& thought_text,
                              const std::string& facilitator_prompt) {
    std::ostringstream out;
    out << "Your structured memory:\n" << memory_text << "\n\n";
    if (!thought_text.empty()) {
        out << "Your current thought:\n" << thought_text << "\n\n";
    }
    out << "Facilitator: " << facilitator_prompt << "\n\nRespond to the facilitator now.";
    return out.str();
}

std::string reaction(const std::string& peer_id, const std::string& statement_text, int limit) {
    std::ostringstream out;
    out << "Here is the most recent statement by " << peer_id << ":\n"
        << statement_text << "\n\n"
        << "Briefly respond to this statement, noting agreement, disagreement, or open "
           "questions. Please respond within "
        << limit << " words.";
    return out.str();
}

std::string judge_system() {
    return "You are a rigorous technical evaluator. Judge the proposal strictly on the text "
           "provided, with no outside assumptions.";
}

std::string judge_criterion(int criterion_id, const std::string& description, int max_points,
                            const std::string& agent_id, const std::string& solution_text) {
    std::ostringstream out;
    out << "Criterion " << criterion_id << ": " << description << " (maximum " << max_points
        << " points)\n\n"
        << "Proposal by " << agent_id << ":\n"
        << solution_text << "\n\n"
        << "Decide how many points (0 to " << max_points
        << ") this proposal earns for the criterion. Reply with a line 'award: <integer>' "
           "followed by a line 'rationale: <one sentence>'.";
    return out.str();
}

}  // namespace prompts

}  // namespace aida
