#include "evaluation.hpp"

#include "errors.hpp"
#include "prompts.hpp"
#include "util.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace aida {

using nlohmann::json;

const RubricCriterion* Rubric::find(int criterion_id) const {
    for (const auto& criterion : criteria) {
        if (criterion.id == criterion_id) {
            return &criterion;
        }
    }
    return nullptr;
}

Rubric Rubric::builtin() {
    Rubric rubric;
    rubric.total_cap = 8;
    rubric.criteria = {
        {1,
         "With no direct mention of blades, a realistic and safe device capable of generating "
         "driving fluid within the size and price range of household appliances is proposed.",
         2, 1, 1},
        {2,
         "Retaining blades is proposed, and they are identified as playing a role in generating "
         "driving fluid or negative pressure.",
         1, 1, 2},
        {3, "Retaining blades is proposed, and enclosing them inside the main body is suggested.",
         1, 1, 2},
        {4,
         "With no direct mention of a motor, retaining blades or a conventionally motor-paired "
         "driving-fluid device is proposed, and the use of household electricity as the motor's "
         "power source is mentioned.",
         2, 2, 1},
        {5,
         "Retaining the motor is proposed, and it is identified as playing a role in generating "
         "driving fluid or negative pressure.",
         1, 2, 2},
        {6,
         "Advanced proposals are made regarding a motor to improve its efficiency or noise "
         "reduction, such as the use of a brushless motor.",
         1, 0, 0},
        {7, "The introduction of a nozzle structure is proposed.", 1, 0, 0},
        {8,
         "Beyond a nozzle structure, proposals are made to optimize internal channels for "
         "improving the efficiency or noise reduction of the driving fluid, graded by number "
         "and specificity.",
         2, 0, 0},
        {9, "Relevant principles of fluid dynamics are explicitly explained.", 1, 0, 0},
    };
    return rubric;
}

Rubric Rubric::load(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& ex) {
        fail(Errc::config_error, ex.what());
    }
    json parsed;
    try {
        parsed = json::parse(text);
        Rubric rubric;
        rubric.total_cap = parsed.at("total_cap").get<int>();
        for (const auto& entry : parsed.at("criteria")) {
            RubricCriterion criterion;
            criterion.id = entry.at("id").get<int>();
            criterion.description = entry.at("description").get<std::string>();
            criterion.max_points = entry.at("max_points").get<int>();
            criterion.exclusivity_group = entry.value("group", 0);
            criterion.branch = entry.value("branch", 0);
            rubric.criteria.push_back(std::move(criterion));
        }
        require(!rubric.criteria.empty(), Errc::config_error, "rubric has no criteria");
        return rubric;
    } catch (const json::exception& ex) {
        fail(Errc::config_error, "rubric " + path.string() + ": " + ex.what());
    }
}

std::vector<std::pair<std::string, std::string>> extract_solutions(const Transcript& transcript) {
    require(transcript.valid(), Errc::invalid_transcript,
            "transcript " + transcript.header().run_id + " is flagged invalid");

    std::vector<std::pair<std::string, std::string>> solutions;
    auto slot = [&](const std::string& agent_id) -> std::string& {
        for (auto& [id, text] : solutions) {
            if (id == agent_id) {
                return text;
            }
        }
        return solutions.emplace_back(agent_id, std::string()).second;
    };

    for (const auto& event : transcript.events()) {
        if (event.kind != EventKind::statement) {
            continue;
        }
        if (event.phase != Phase::C && event.phase != Phase::D && event.phase != Phase::E) {
            continue;
        }
        std::string& text = slot(event.agent_id);
        if (!text.empty()) {
            text += "\n\n";
        }
        text += event.payload.value("text", "");
    }
    require(!solutions.empty(), Errc::invalid_transcript,
            "transcript has no solution-bearing statements");
    return solutions;
}

RunScore apply_rubric(const std::map<int, int>& raw_awards, const Rubric& rubric) {
    for (const auto& [id, award] : raw_awards) {
        const RubricCriterion* criterion = rubric.find(id);
        require(criterion != nullptr, Errc::award_out_of_range,
                "unknown criterion c" + std::to_string(id));
        require(award >= 0 && award <= criterion->max_points, Errc::award_out_of_range,
                "c" + std::to_string(id) + " awarded " + std::to_string(award) + ", maximum is " +
                    std::to_string(criterion->max_points));
    }

    auto award_of = [&](int id) {
        auto it = raw_awards.find(id);
        return it == raw_awards.end() ? 0 : it->second;
    };

    // Branch sums per exclusivity group; the higher branch wins the group.
    std::map<int, std::map<int, int>> group_branch_sums;
    for (const auto& criterion : rubric.criteria) {
        if (criterion.exclusivity_group != 0) {
            group_branch_sums[criterion.exclusivity_group][criterion.branch] +=
                award_of(criterion.id);
        }
    }
    std::map<int, int> winning_branch;
    for (const auto& [group, branches] : group_branch_sums) {
        int best_branch = 0;
        int best_sum = -1;
        for (const auto& [branch, sum] : branches) {
            if (sum > best_sum) {
                best_branch = branch;
                best_sum = sum;
            }
        }
        winning_branch[group] = best_branch;
    }

    RunScore score;
    score.raw_awards = raw_awards;
    int total = 0;
    for (const auto& criterion : rubric.criteria) {
        const int award = award_of(criterion.id);
        const bool counted = criterion.exclusivity_group == 0 ||
                             winning_branch[criterion.exclusivity_group] == criterion.branch;
        const int effective = counted ? award : 0;
        if (award != 0 || raw_awards.count(criterion.id) > 0) {
            score.effective_awards[criterion.id] = effective;
        }
        total += effective;
    }
    if (total > rubric.total_cap) {
        total = rubric.total_cap;
        score.cap_bound = true;
    }
    score.total = total;
    return score;
}

std::vector<RunScore> import_human_scores(const std::filesystem::path& csv_path,
                                          const Rubric& rubric) {
    const std::string text = read_file(csv_path);
    const auto lines = split_lines(text);
    require(!lines.empty(), Errc::parse_error, "score file is empty");

    auto split_row = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.emplace_back(trim(cell));
        }
        return cells;
    };

    const auto header = split_row(lines[0]);
    require(!header.empty() && header[0] == "run_id", Errc::parse_error,
            "score file must start with a header row: run_id,c1,...");
    std::vector<int> criterion_ids;
    for (std::size_t i = 1; i < header.size(); ++i) {
        require(header[i].size() >= 2 && header[i][0] == 'c', Errc::parse_error,
                "bad criterion column: " + header[i]);
        int id = 0;
        try {
            id = std::stoi(header[i].substr(1));
        } catch (const std::exception&) {
            fail(Errc::parse_error, "bad criterion column: " + header[i]);
        }
        require(rubric.find(id) != nullptr, Errc::parse_error,
                "unknown criterion column: " + header[i]);
        criterion_ids.push_back(id);
    }

    std::vector<RunScore> scores;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        if (trim(lines[row]).empty()) {
            continue;
        }
        const auto cells = split_row(lines[row]);
        require(cells.size() == criterion_ids.size() + 1, Errc::parse_error,
                "row " + std::to_string(row + 1) + " has " + std::to_string(cells.size()) +
                    " cells, expected " + std::to_string(criterion_ids.size() + 1));
        std::map<int, int> raw;
        for (std::size_t i = 0; i < criterion_ids.size(); ++i) {
            int value = 0;
            try {
                value = std::stoi(cells[i + 1]);
            } catch (const std::exception&) {
                fail(Errc::parse_error, "row " + std::to_string(row + 1) +
                                            ": not a number: " + cells[i + 1]);
            }
            raw[criterion_ids[i]] = value;
        }
        RunScore score = apply_rubric(raw, rubric);
        score.run_id = cells[0];
        score.scorer = Scorer::human;
        scores.push_back(std::move(score));
    }
    return scores;
}

namespace {

struct JudgeVerdict {
    int award = 0;
    std::string rationale;
};

JudgeVerdict parse_judge_reply(const std::string& text, int max_points) {
    JudgeVerdict verdict;
    bool found = false;
    for (const auto& raw : split_lines(text)) {
        const std::string line = std::string(trim(raw));
        const std::string lowered = to_lower(line);
        if (!found && lowered.rfind("award", 0) == 0) {
            std::size_t i = 5;
            while (i < line.size() && (line[i] == ':' || line[i] == ' ' || line[i] == '=')) {
                ++i;
            }
            require(i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])),
                    Errc::parse_error, "unscorable judge output: " + line);
            verdict.award = std::stoi(line.substr(i));
            found = true;
        } else if (lowered.rfind("rationale", 0) == 0) {
            auto colon = line.find(':');
            verdict.rationale =
                colon == std::string::npos ? line : std::string(trim(line.substr(colon + 1)));
        }
    }
    require(found, Errc::parse_error, "judge output has no award line");
    if (verdict.award < 0 || verdict.award > max_points) {
        const int clamped = std::clamp(verdict.award, 0, max_points);
        warn("judge award clamp: " + std::to_string(verdict.award) + " -> " +
             std::to_string(clamped));
        verdict.award = clamped;
    }
    return verdict;
}

}  // namespace

RunScore judge(const Transcript& transcript, const Rubric& rubric, Backend& backend,
               const std::string& judge_model_id, int min_agreeing) {
    const auto solutions = extract_solutions(transcript);
    const int n = static_cast<int>(solutions.size());
    const int threshold = min_agreeing > 0 ? min_agreeing : (n + 1) / 2;

    std::map<int, int> raw;
    std::map<int, std::string> rationales;
    for (const auto& criterion : rubric.criteria) {
        std::vector<int> awards;
        std::string rationale;
        for (const auto& [agent_id, solution] : solutions) {
            CompletionRequest request;
            request.model_id = judge_model_id;
            request.temperature = 0.0;
            request.seed = transcript.header().seed;
            request.max_tokens = 256;
            request.messages.push_back({Role::system, prompts::judge_system()});
            request.messages.push_back(
                {Role::user, prompts::judge_criterion(criterion.id, criterion.description,
                                                      criterion.max_points, agent_id, solution)});
            const JudgeVerdict verdict =
                parse_judge_reply(backend.complete(request).content, criterion.max_points);
            awards.push_back(verdict.award);
            if (!rationale.empty()) {
                rationale += " | ";
            }
            rationale += agent_id + " (" + std::to_string(verdict.award) + "): " +
                         verdict.rationale;
        }
        // Highest points level reached by at least `threshold` agents; for
        // 0/1-point criteria this is exactly the majority-satisfaction rule.
        int granted = 0;
        for (int level = 1; level <= criterion.max_points; ++level) {
            const int reaching = static_cast<int>(
                std::count_if(awards.begin(), awards.end(), [&](int a) { return a >= level; }));
            if (reaching >= threshold) {
                granted = level;
            }
        }
        raw[criterion.id] = granted;
        rationales[criterion.id] = rationale;
    }

    RunScore score = apply_rubric(raw, rubric);
    score.run_id = transcript.header().run_id;
    score.model = transcript.header().model;
    score.seed = transcript.header().seed;
    score.config_digest = transcript.header().config_digest;
    score.scorer = Scorer::llm_judge;
    score.rationales = std::move(rationales);
    return score;
}

SummaryStats aggregate(const std::string& model, const std::vector<double>& totals) {
    require(!totals.empty(), Errc::empty_scores, "no scores to aggregate for " + model);
    SummaryStats stats;
    stats.model = model;
    stats.n = static_cast<int>(totals.size());
    stats.min = *std::min_element(totals.begin(), totals.end());
    stats.max = *std::max_element(totals.begin(), totals.end());
    double sum = 0;
    for (const double total : totals) {
        sum += total;
    }
    stats.mean = sum / static_cast<double>(stats.n);
    if (stats.n > 1) {
        double squared = 0;
        for (const double total : totals) {
            squared += (total - stats.mean) * (total - stats.mean);
        }
        stats.stddev = std::sqrt(squared / static_cast<double>(stats.n - 1));
    }
    return stats;
}

json score_to_json(const RunScore& score) {
    json awards = json::object();
    for (const auto& [id, value] : score.raw_awards) {
        awards["c" + std::to_string(id)] = value;
    }
    json effective = json::object();
    for (const auto& [id, value] : score.effective_awards) {
        effective["c" + std::to_string(id)] = value;
    }
    json rationales = json::object();
    for (const auto& [id, text] : score.rationales) {
        rationales["c" + std::to_string(id)] = text;
    }
    return json{
        {"run_id", score.run_id},
        {"model", score.model},
        {"seed", score.seed},
        {"config_digest", score.config_digest},
        {"awards", awards},
        {"effective_awards", effective},
        {"rationales", rationales},
        {"total", score.total},
        {"cap_bound", score.cap_bound},
        {"scorer", score.scorer == Scorer::human ? "human" : "llm_judge"},
        {"valid", score.valid},
    };
}

RunScore score_from_json(const json& value) {
    RunScore score;
    try {
        score.run_id = value.at("run_id").get<std::string>();
        score.model = value.value("model", "");
        score.seed = value.value("seed", std::int64_t{0});
        score.config_digest = value.value("config_digest", "");
        for (const auto& [key, award] : value.at("awards").items()) {
            score.raw_awards[std::stoi(key.substr(1))] = award.get<int>();
        }
        if (value.contains("effective_awards")) {
            for (const auto& [key, award] : value["effective_awards"].items()) {
                score.effective_awards[std::stoi(key.substr(1))] = award.get<int>();
            }
        }
        if (value.contains("rationales")) {
            for (const auto& [key, text] : value["rationales"].items()) {
                score.rationales[std::stoi(key.substr(1))] = text.get<std::string>();
            }
        }
        score.total = value.at("total").get<int>();
        score.cap_bound = value.value("cap_bound", false);
        score.scorer = value.value("scorer", "human") == "human" ? Scorer::human : Scorer::llm_judge;
        score.valid = value.value("valid", true);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& ex) {
        fail(Errc::parse_error, std::string("malformed score: ") + ex.what());
    }
    return score;
}

std::string render_report(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(8) << "Model" << std::right << std::setw(4) << "N"
        << std::setw(7) << "Min" << std::setw(7) << "Max" << std::setw(9) << "Mean"
        << std::setw(8) << "Std" << '\n';
    out << std::string(43, '-') << '\n';
    out << std::fixed;
    for (const auto& row : rows) {
        out << std::left << std::setw(8) << row.stats.model << std::right << std::setw(4)
            << row.stats.n << std::setprecision(0) << std::setw(7) << row.stats.min << std::setw(7)
            << row.stats.max << std::setprecision(2) << std::setw(9) << row.stats.mean
            << std::setw(8) << row.stats.stddev;
        if (row.cap_bound_runs > 0) {
            out << "  [cap bound in " << row.cap_bound_runs << " run(s)]";
        }
        out << '\n';
    }
    return out.str();
}

json report_to_json(const std::vector<ReportRow>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
        out.push_back({
            {"model", row.stats.model},
            {"n", row.stats.n},
            {"min", row.stats.min},
            {"max", row.stats.max},
            {"mean", row.stats.mean},
            {"stddev", row.stats.stddev},
            {"cap_bound_runs", row.cap_bound_runs},
        });
    }
    return out;
}

}  // namespace aida
