#include "internal_state.hpp"

#include "errors.hpp"
#include "prompts.hpp"
#include "util.hpp"

#include <algorithm>
#include <cctype>

namespace aida {

void MotivationWeights::validate() const {
    require(novelty >= 0 && importance >= 0 && consensus >= 0, Errc::precondition,
            "motivation weights must be non-negative");
    require(novelty > 0 || importance > 0 || consensus > 0, Errc::precondition,
            "at least one motivation weight must be positive");
}

double intrinsic_reward(const IdeaScores& scores, const MotivationWeights& weights) {
    return weights.novelty * scores.novelty + weights.importance * scores.importance +
           weights.consensus * scores.consensus;
}

std::size_t select_idea_index(const std::vector<Idea>& ideas, const MotivationWeights& weights) {
    require(!ideas.empty(), Errc::empty_list, "no ideas to select from");
    weights.validate();
    std::size_t best = 0;
    double best_reward = 0;
    for (std::size_t i = 0; i < ideas.size(); ++i) {
        require(ideas[i].scores.has_value(), Errc::precondition,
                "idea " + std::to_string(i) + " is unscored");
        const double reward = intrinsic_reward(*ideas[i].scores, weights);
        if (i == 0 || reward > best_reward) {
            best = i;
            best_reward = reward;
        }
    }
    return best;
}

const Idea& select_idea(const std::vector<Idea>& ideas, const MotivationWeights& weights) {
    return ideas[select_idea_index(ideas, weights)];
}

CurrentThought update_thought(const CurrentThought& thought, const Idea& refined_idea,
                              const std::vector<PeerAssessment>& assessments, Phase phase,
                              std::uint64_t now) {
    require(refined_idea.refined, Errc::precondition, "idea has not been through introspection");
    CurrentThought updated = update_thought(thought, assessments, phase, now);
    if (!refined_idea.text.empty()) {
        updated.section(phase).bullets.push_back(single_line(refined_idea.text));
    }
    return updated;
}

CurrentThought update_thought(const CurrentThought& thought,
                              const std::vector<PeerAssessment>& assessments, Phase phase,
                              std::uint64_t now) {
    CurrentThought updated = thought;
    auto& section = updated.section(phase);
    for (const auto& assessment : assessments) {
        PeerAssessment normalized = assessment;
        for (auto& bullet : normalized.agree_or_interesting) {
            bullet = single_line(bullet);
        }
        for (auto& bullet : normalized.contradictory_or_missing) {
            bullet = single_line(bullet);
        }
        section.assessments[normalized.peer_id] = std::move(normalized);
    }
    updated.set_last_updated(now);
    return updated;
}

std::vector<std::string> parse_numbered_list(const std::string& text) {
    std::vector<std::string> items;
    for (const auto& raw : split_lines(text)) {
        std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }
        std::size_t i = 0;
        while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i == 0 || i >= line.size()) {
            continue;
        }
        if (line[i] != '.' && line[i] != ')') {
            continue;
        }
        std::string_view body = trim(line.substr(i + 1));
        if (!body.empty()) {
            items.emplace_back(body);
        }
    }
    return items;
}

std::optional<IdeaScores> parse_scores(const std::string& text) {
    auto find_value = [&](const char* label) -> std::optional<int> {
        const std::string lowered = to_lower(text);
        auto pos = lowered.find(label);
        if (pos == std::string::npos) {
            return std::nullopt;
        }
        pos += std::string(label).size();
        while (pos < lowered.size() &&
               (lowered[pos] == ':' || lowered[pos] == ' ' || lowered[pos] == '=')) {
            ++pos;
        }
        bool negative = pos < lowered.size() && lowered[pos] == '-';
        if (negative) {
            ++pos;
        }
        if (pos >= lowered.size() || !std::isdigit(static_cast<unsigned char>(lowered[pos]))) {
            return std::nullopt;
        }
        int value = 0;
        while (pos < lowered.size() && std::isdigit(static_cast<unsigned char>(lowered[pos]))) {
            value = value * 10 + (lowered[pos] - '0');
            ++pos;
        }
        return negative ? -value : value;
    };

    auto novelty = find_value("novelty");
    auto importance = find_value("importance");
    auto consensus = find_value("consensus");
    if (!novelty || !importance || !consensus) {
        return std::nullopt;
    }

    auto clamp_score = [](int value, const char* label) {
        if (value < 1 || value > 10) {
            const int clamped = std::clamp(value, 1, 10);
            warn(std::string("score clamp: ") + label + " " + std::to_string(value) + " -> " +
                 std::to_string(clamped));
            return clamped;
        }
        return value;
    };
    IdeaScores scores;
    scores.novelty = clamp_score(*novelty, "novelty");
    scores.importance = clamp_score(*importance, "importance");
    scores.consensus = clamp_score(*consensus, "consensus");
    return scores;
}

PeerAssessment parse_assessment(const std::string& text, const std::string& peer_id) {
    PeerAssessment assessment;
    assessment.peer_id = peer_id;
    std::vector<std::string>* active = nullptr;
    for (const auto& raw : split_lines(text)) {
        std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (contains_ci(line, "agree or interesting")) {
            active = &assessment.agree_or_interesting;
            continue;
        }
        if (contains_ci(line, "contradictory or missing")) {
            active = &assessment.contradictory_or_missing;
            continue;
        }
        if (active != nullptr && (line.rfind("- ", 0) == 0 || line.rfind("* ", 0) == 0)) {
            active->emplace_back(trim(line.substr(2)));
        }
    }
    return assessment;
}

InternalState::InternalState(Backend& backend, MotivationWeights weights, std::string model_id,
                             double temperature, std::int64_t seed, int max_tokens)
    : backend_(backend),
      weights_(weights),
      model_id_(std::move(model_id)),
      temperature_(temperature),
      seed_(seed),
      max_tokens_(max_tokens) {
    weights_.validate();
}

CompletionRequest InternalState::make_request(const std::string& system_prompt,
                                              const std::string& user_prompt) const {
    CompletionRequest request;
    request.model_id = model_id_;
    request.temperature = temperature_;
    request.seed = seed_;
    request.max_tokens = max_tokens_;
    request.messages.push_back({Role::system, system_prompt});
    request.messages.push_back({Role::user, user_prompt});
    return request;
}

std::vector<Idea> InternalState::generate_ideas(const StructuredMemory& memory,
                                                const CurrentThought& thought,
                                                const std::string& topic, int k,
                                                const std::string& system_prompt) {
    ++ops_;
    require(k >= 1, Errc::precondition, "k must be >= 1");

    const std::string thought_text = thought.empty() ? std::string() : thought.to_text();
    CompletionRequest request = make_request(
        system_prompt, prompts::idea_generation(memory.to_text(), thought_text, topic, k));

    auto items = parse_numbered_list(backend_.complete(request).content);
    if (items.empty()) {
        request.messages.push_back({Role::user, prompts::idea_generation_retry(k)});
        items = parse_numbered_list(backend_.complete(request).content);
    }
    require(!items.empty(), Errc::parse_error, "completion contained no parseable ideas");

    if (items.size() > static_cast<std::size_t>(k)) {
        items.resize(static_cast<std::size_t>(k));
    }
    std::vector<Idea> ideas;
    ideas.reserve(items.size());
    for (auto& item : items) {
        Idea idea;
        idea.text = std::move(item);
        idea.topic = topic;
        ideas.push_back(std::move(idea));
    }
    return ideas;
}

IdeaScores InternalState::score_idea(const Idea& idea, const StructuredMemory& memory,
                                     const CurrentThought& thought,
                                     const std::string& system_prompt) {
    ++ops_;
    require(!idea.scores.has_value(), Errc::precondition, "idea is already scored");

    const std::string thought_text = thought.empty() ? std::string() : thought.to_text();
    CompletionRequest request = make_request(
        system_prompt,
        prompts::idea_scoring(memory.conversation_text(), thought_text, idea.text));

    auto scores = parse_scores(backend_.complete(request).content);
    if (!scores) {
        request.messages.push_back({Role::user, prompts::idea_scoring_retry()});
        scores = parse_scores(backend_.complete(request).content);
    }
    require(scores.has_value(), Errc::parse_error, "fewer than three scores recoverable");
    return *scores;
}

Idea InternalState::introspect(Idea idea, const std::string& system_prompt) {
    ++ops_;
    require(!idea.text.empty(), Errc::precondition, "cannot introspect an empty idea");

    const std::string critique =
        backend_.complete(make_request(system_prompt, prompts::critique(idea.text))).content;
    idea.notes.push_back(single_line(critique));

    if (!contains_ci(critique, "no issues")) {
        const std::string revised =
            backend_.complete(make_request(system_prompt, prompts::revision(idea.text, critique)))
                .content;
        require(!trim(revised).empty(), Errc::parse_error, "revision produced no text");
        idea.text = std::string(trim(revised));
    }
    idea.refined = true;
    return idea;
}

PeerAssessment InternalState::assess_peer(const CurrentThought& thought,
                                          const std::vector<MemoryRecord>& recent_conversation,
                                          const std::string& peer_id,
                                          const std::string& system_prompt) {
    ++ops_;
    std::string peer_statements;
    for (const auto& record : recent_conversation) {
        if (record.kind == RecordKind::conversation_turn && record.author == peer_id) {
            peer_statements += record.content;
            peer_statements += '\n';
        }
    }
    require(!peer_statements.empty(), Errc::no_peer_statements,
            peer_id + " has no statement in the recent conversation");

    const std::string thought_text = thought.empty() ? std::string() : thought.to_text();
    const std::string content =
        backend_
            .complete(make_request(system_prompt,
                                   prompts::peer_assessment(peer_id, peer_statements, thought_text)))
            .content;
    return parse_assessment(content, peer_id);
}

std::size_t InternalState::select(const std::vector<Idea>& ideas) {
    ++ops_;
    return select_idea_index(ideas, weights_);
}

CurrentThought InternalState::merge_into_thought(const CurrentThought& thought,
                                                 const Idea& refined_idea,
                                                 const std::vector<PeerAssessment>& assessments,
                                                 Phase phase, std::uint64_t now) {
    ++ops_;
    return update_thought(thought, refined_idea, assessments, phase, now);
}

CurrentThought InternalState::merge_assessments(const CurrentThought& thought,
                                                const std::vector<PeerAssessment>& assessments,
                                                Phase phase, std::uint64_t now) {
    ++ops_;
    return update_thought(thought, assessments, phase, now);
}

}  // namespace aida
