#pragma once

#include "backend.hpp"
#include "transcript.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace aida {

struct RubricCriterion {
    int id = 0;
    std::string description;
    int max_points = 1;
    int exclusivity_group = 0;  // 0 = none
    int branch = 0;             // branch id within the group
};

/// Nine-criterion point rubric. Criteria whose wording makes them mutually
/// exclusive sit in the same group on different branches: within a group
/// only the higher-scoring branch counts, and the grand total is capped.
/// The listed points sum above the cap; groups plus cap encode
/// the reconciliation, and both live in data so they stay configurable.
struct Rubric {
    std::vector<RubricCriterion> criteria;
    int total_cap = 8;

    const RubricCriterion* find(int criterion_id) const;

    /// The built-in nine-criterion rubric: points 2,1,1,2,1,1,1,2,1 with
    /// groups {c1 | c2+c3} and {c4 | c5}, capped at 8.
    static Rubric builtin();
    static Rubric load(const std::filesystem::path& path);
};

enum class Scorer { human, llm_judge };

struct RunScore {
    std::string run_id;
    std::string model;
    std::int64_t seed = 0;
    std::string config_digest;  // provenance, copied from the transcript
    std::map<int, int> raw_awards;        // criterion id -> points granted
    std::map<int, int> effective_awards;  // after group resolution
    std::map<int, std::string> rationales;
    int total = 0;
    bool cap_bound = false;  // the cap (not the criteria) limited the total
    Scorer scorer = Scorer::human;
    bool valid = true;
};

struct SummaryStats {
    std::string model;
    double min = 0;
    double max = 0;
    double mean = 0;
    double stddev = 0;  // sample, n-1 denominator; 0 when n == 1
    int n = 0;
};

/// Per-agent concatenation of the solution-bearing opinion statements
/// (phases C-E) of a valid transcript, keyed by agent id in first-speech
/// order. Throws Errc::invalid_transcript on an aborted run.
std::vector<std::pair<std::string, std::string>> extract_solutions(const Transcript& transcript);

/// Group resolution plus cap. `raw_awards` must stay within each
/// criterion's maximum (Errc::award_out_of_range otherwise).
RunScore apply_rubric(const std::map<int, int>& raw_awards, const Rubric& rubric);

/// One row per run: `run_id,c1,...,c9` with a header line.
std::vector<RunScore> import_human_scores(const std::filesystem::path& csv_path,
                                          const Rubric& rubric);

/// LLM-judged score of one transcript: each criterion is put to the judge
/// once per agent solution; a points level counts for the run when at least
/// `min_agreeing` agents reach it (0 = ceil(n/2), the majority rule).
RunScore judge(const Transcript& transcript, const Rubric& rubric, Backend& backend,
               const std::string& judge_model_id, int min_agreeing = 0);

/// Min / max / mean / sample standard deviation of run totals.
SummaryStats aggregate(const std::string& model, const std::vector<double>& totals);

nlohmann::json score_to_json(const RunScore& score);
RunScore score_from_json(const nlohmann::json& value);

struct ReportRow {
    SummaryStats stats;
    int cap_bound_runs = 0;
};

/// Aligned text table over per-model rows, plus the machine-readable form.
std::string render_report(const std::vector<ReportRow>& rows);
nlohmann::json report_to_json(const std::vector<ReportRow>& rows);

}  // namespace aida
