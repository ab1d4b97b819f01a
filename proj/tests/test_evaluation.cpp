#include "evaluation.hpp"

#include "dialogue.hpp"
#include "errors.hpp"
#include "scripted_backend.hpp"
#include "support.hpp"
#include "util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace aida;

namespace {

Transcript scripted_transcript(int n_agents, int rounds) {
    DialogueConfig config;
    for (Phase phase : kDiscussionPhases) {
        config.rounds_per_phase[phase] = rounds;
    }
    RunClock clock;
    ScriptedBackend backend;
    const Corpus corpus = test::mini_corpus();
    std::vector<std::string> ids;
    for (int i = 1; i <= n_agents; ++i) {
        ids.push_back("agent_" + std::to_string(i));
    }
    std::vector<std::unique_ptr<Agent>> agents;
    for (const auto& id : ids) {
        AgentConfig agent_config;
        agent_config.agent_id = id;
        agents.push_back(std::make_unique<Agent>(agent_config, backend,
                                                 LlmProfile{"test-model", 0.7, 1, 512}, clock,
                                                 corpus.target_domain, corpus.source_domain));
    }
    DialogueOrchestrator orchestrator(agents, OrgGraph::flat(ids), corpus, config,
                                      {"eval-run", "T", 1, "digest"}, clock);
    return orchestrator.run_all();
}

std::map<int, int> all_max_awards(const Rubric& rubric) {
    std::map<int, int> awards;
    for (const auto& criterion : rubric.criteria) {
        awards[criterion.id] = criterion.max_points;
    }
    return awards;
}

}  // namespace

TEST_CASE("the shipped rubric file encodes the same scheme as the built-in") {
    const Rubric from_file =
        Rubric::load(test::repo_root() / "data" / "rubric.json");
    const Rubric builtin = Rubric::builtin();
    REQUIRE(from_file.criteria.size() == builtin.criteria.size());
    CHECK(from_file.total_cap == builtin.total_cap);
    for (std::size_t i = 0; i < builtin.criteria.size(); ++i) {
        CHECK(from_file.criteria[i].id == builtin.criteria[i].id);
        CHECK(from_file.criteria[i].max_points == builtin.criteria[i].max_points);
        CHECK(from_file.criteria[i].exclusivity_group == builtin.criteria[i].exclusivity_group);
        CHECK(from_file.criteria[i].branch == builtin.criteria[i].branch);
    }
}

TEST_CASE("the built-in rubric matches the published point scheme") {
    const Rubric rubric = Rubric::builtin();
    REQUIRE(rubric.criteria.size() == 9);
    const int expected_points[] = {2, 1, 1, 2, 1, 1, 1, 2, 1};
    int listed_total = 0;
    for (int id = 1; id <= 9; ++id) {
        const RubricCriterion* criterion = rubric.find(id);
        REQUIRE(criterion != nullptr);
        CHECK(criterion->max_points == expected_points[id - 1]);
        listed_total += criterion->max_points;
    }
    CHECK(listed_total == 12);  // reconciled to 8 by groups + cap
    CHECK(rubric.total_cap == 8);
}

TEST_CASE("exclusive branches never double-count") {
    const Rubric rubric = Rubric::builtin();

    SUBCASE("c1 beats a weaker c2 award") {
        const RunScore score = apply_rubric({{1, 2}, {2, 1}}, rubric);
        CHECK(score.total == 2);
        CHECK(score.effective_awards.at(1) == 2);
        CHECK(score.effective_awards.at(2) == 0);
    }

    SUBCASE("c2 + c3 tie c1 and the group yields 2 either way") {
        const RunScore score = apply_rubric({{1, 2}, {2, 1}, {3, 1}}, rubric);
        CHECK(score.total == 2);
    }

    SUBCASE("c4 and c5 are mutually exclusive") {
        const RunScore score = apply_rubric({{4, 2}, {5, 1}}, rubric);
        CHECK(score.total == 2);
    }

    SUBCASE("exhaustive check over the whole group lattice") {
        // Oracle: enumerate every award combination of the grouped criteria
        // and verify group totals equal max(branch sums).
        for (int c1 = 0; c1 <= 2; ++c1) {
            for (int c2 = 0; c2 <= 1; ++c2) {
                for (int c3 = 0; c3 <= 1; ++c3) {
                    for (int c4 = 0; c4 <= 2; ++c4) {
                        for (int c5 = 0; c5 <= 1; ++c5) {
                            const RunScore score =
                                apply_rubric({{1, c1}, {2, c2}, {3, c3}, {4, c4}, {5, c5}}, rubric);
                            const int expected =
                                std::max(c1, c2 + c3) + std::max(c4, c5);
                            CHECK(score.total == std::min(expected, 8));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("the all-max case scores exactly the cap") {
    const Rubric rubric = Rubric::builtin();
    const RunScore score = apply_rubric(all_max_awards(rubric), rubric);
    CHECK(score.total == 8);
    CHECK(score.cap_bound);

    CHECK(apply_rubric({}, rubric).total == 0);
}

TEST_CASE("awards outside a criterion's range are rejected") {
    const Rubric rubric = Rubric::builtin();
    CHECK_THROWS_AS(apply_rubric({{1, 3}}, rubric), Error);
    CHECK_THROWS_AS(apply_rubric({{2, -1}}, rubric), Error);
    CHECK_THROWS_AS(apply_rubric({{42, 1}}, rubric), Error);
}

TEST_CASE("randomized awards never exceed the cap nor double-count") {
    const Rubric rubric = Rubric::builtin();
    std::mt19937 rng(31);
    for (int trial = 0; trial < 3000; ++trial) {
        std::map<int, int> awards;
        for (const auto& criterion : rubric.criteria) {
            awards[criterion.id] = static_cast<int>(rng() % (criterion.max_points + 1));
        }
        const RunScore score = apply_rubric(awards, rubric);
        CHECK(score.total <= 8);
        const bool c1 = score.effective_awards.at(1) > 0;
        const bool c23 = score.effective_awards.at(2) > 0 || score.effective_awards.at(3) > 0;
        CHECK_FALSE((c1 && c23));
        const bool c4 = score.effective_awards.at(4) > 0;
        const bool c5 = score.effective_awards.at(5) > 0;
        CHECK_FALSE((c4 && c5));
    }
}

TEST_CASE("human score import parses rows and enforces ranges") {
    const Rubric rubric = Rubric::builtin();
    test::TempDir dir("scores");

    SUBCASE("a well-formed file yields totals under the cap") {
        write_file(dir.path() / "scores.csv",
                   "run_id,c1,c2,c3,c4,c5,c6,c7,c8,c9\n"
                   "run1,2,0,0,0,0,0,1,0,1\n"
                   "run2,0,1,1,0,1,1,1,2,1\n"
                   "run3,2,1,1,2,1,1,1,2,1\n");
        const auto scores = import_human_scores(dir.path() / "scores.csv", rubric);
        REQUIRE(scores.size() == 3);
        CHECK(scores[0].run_id == "run1");
        CHECK(scores[0].total == 4);
        CHECK(scores[1].total == 8);  // 2+1+1+1+2+1 = 8, no cap
        CHECK_FALSE(scores[1].cap_bound);
        CHECK(scores[2].total == 8);
        CHECK(scores[2].cap_bound);
        CHECK(scores[0].scorer == Scorer::human);
    }

    SUBCASE("out-of-range awards are rejected") {
        write_file(dir.path() / "bad.csv", "run_id,c1\nrun1,3\n");
        CHECK_THROWS_AS(import_human_scores(dir.path() / "bad.csv", rubric), Error);
    }

    SUBCASE("a header-only file yields an empty list") {
        write_file(dir.path() / "empty.csv", "run_id,c1,c2\n");
        CHECK(import_human_scores(dir.path() / "empty.csv", rubric).empty());
    }

    SUBCASE("a missing header is a parse error") {
        write_file(dir.path() / "headerless.csv", "run1,1,1\n");
        CHECK_THROWS_AS(import_human_scores(dir.path() / "headerless.csv", rubric), Error);
    }
}

TEST_CASE("extract_solutions concatenates phase C-E opinions per agent") {
    SUBCASE("one agent, two rounds per phase: six statements") {
        const Transcript transcript = scripted_transcript(1, 2);
        const auto solutions = extract_solutions(transcript);
        REQUIRE(solutions.size() == 1);
        CHECK(solutions[0].first == "agent_1");
        // 3 phases x 2 rounds, joined by blank lines.
        const std::string& text = solutions[0].second;
        std::size_t blocks = 1;
        for (std::size_t at = text.find("\n\n"); at != std::string::npos;
             at = text.find("\n\n", at + 2)) {
            ++blocks;
        }
        CHECK(blocks == 6);
    }

    SUBCASE("five agents yield five solution texts") {
        const Transcript transcript = scripted_transcript(5, 1);
        CHECK(extract_solutions(transcript).size() == 5);
    }

    SUBCASE("invalid transcripts are refused") {
        Transcript invalid{{"bad", "A", 1, "d"}};
        TranscriptEvent event;
        event.run_id = "bad";
        event.timestamp = 1;
        event.kind = EventKind::error;
        event.payload = {{"message", "boom"}, {"fatal", true}};
        invalid.append(event);
        CHECK_THROWS_AS(extract_solutions(invalid), Error);
    }
}

TEST_CASE("the judge applies the majority rule over agent solutions") {
    Rubric rubric;
    rubric.total_cap = 8;
    rubric.criteria = {{1, "first criterion", 1, 0, 0}, {2, "second criterion", 2, 0, 0}};

    SUBCASE("3 agents, satisfied by 2: counted") {
        const Transcript transcript = scripted_transcript(3, 1);
        // Per criterion, per agent in order: c1 gets yes/yes/no, c2 gets 2/0/1.
        test::SequenceBackend backend({
            "award: 1\nrationale: solid",
            "award: 1\nrationale: solid",
            "award: 0\nrationale: absent",
            "award: 2\nrationale: detailed",
            "award: 0\nrationale: absent",
            "award: 1\nrationale: partial",
        });
        const RunScore score = judge(transcript, rubric, backend, "judge-model");
        CHECK(score.raw_awards.at(1) == 1);
        // Majority (2 of 3) reaches level 1 on c2; only one reaches level 2.
        CHECK(score.raw_awards.at(2) == 1);
        CHECK(score.total == 2);
        CHECK(score.scorer == Scorer::llm_judge);
        CHECK_FALSE(score.rationales.at(1).empty());
    }

    SUBCASE("5 agents, satisfied by 2: not counted (needs 3)") {
        const Transcript transcript = scripted_transcript(5, 1);
        std::vector<std::string> replies;
        for (int agent = 0; agent < 5; ++agent) {
            replies.push_back(agent < 2 ? "award: 1\nrationale: yes" : "award: 0\nrationale: no");
        }
        Rubric single;
        single.total_cap = 8;
        single.criteria = {{1, "only criterion", 1, 0, 0}};
        test::SequenceBackend backend(replies);
        const RunScore score = judge(transcript, single, backend, "judge-model");
        CHECK(score.raw_awards.at(1) == 0);
        CHECK(score.total == 0);
    }

    SUBCASE("1 agent, satisfied: counted") {
        const Transcript transcript = scripted_transcript(1, 1);
        Rubric single;
        single.total_cap = 8;
        single.criteria = {{1, "only criterion", 1, 0, 0}};
        test::SequenceBackend backend({"award: 1\nrationale: direct"});
        const RunScore score = judge(transcript, single, backend, "judge-model");
        CHECK(score.total == 1);
    }

    SUBCASE("unscorable judge output is a parse error") {
        const Transcript transcript = scripted_transcript(1, 1);
        Rubric single;
        single.total_cap = 8;
        single.criteria = {{1, "only criterion", 1, 0, 0}};
        test::SequenceBackend backend({"I think it is fine"});
        CHECK_THROWS_AS(judge(transcript, single, backend, "judge-model"), Error);
    }
}

TEST_CASE("majority monotonicity: adding a satisfying solution never uncounts") {
    Rubric single;
    single.total_cap = 8;
    single.criteria = {{1, "criterion", 1, 0, 0}};
    std::mt19937 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        std::vector<int> awards;
        for (int i = 0; i < n; ++i) {
            awards.push_back(static_cast<int>(rng() % 2));
        }
        auto counted = [&](const std::vector<int>& a) {
            const int threshold = (static_cast<int>(a.size()) + 1) / 2;
            int satisfied = 0;
            for (int award : a) {
                satisfied += award >= 1 ? 1 : 0;
            }
            return satisfied >= threshold;
        };
        if (counted(awards)) {
            auto extended = awards;
            extended.push_back(1);
            CHECK(counted(extended));
        }
    }
}

TEST_CASE("aggregate matches hand-computed statistics") {
    const SummaryStats flat = aggregate("X", {4, 4, 4});
    CHECK(flat.min == 4);
    CHECK(flat.max == 4);
    CHECK(flat.mean == doctest::Approx(4));
    CHECK(flat.stddev == doctest::Approx(0));

    const SummaryStats two = aggregate("Y", {3, 7});
    CHECK(two.mean == doctest::Approx(5));
    CHECK(two.stddev == doctest::Approx(std::sqrt(8.0)));  // sample std of {3,7}

    CHECK_THROWS_AS(aggregate("Z", {}), Error);
}

TEST_CASE("aggregate equals a brute-force oracle on random lists") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 50);
        std::vector<double> totals;
        for (int i = 0; i < n; ++i) {
            totals.push_back(static_cast<double>(rng() % 9));
        }
        const SummaryStats stats = aggregate("M", totals);

        double lo = totals[0];
        double hi = totals[0];
        double sum = 0;
        for (const double value : totals) {
            lo = std::min(lo, value);
            hi = std::max(hi, value);
            sum += value;
        }
        const double mean = sum / n;
        double squares = 0;
        for (const double value : totals) {
            squares += (value - mean) * (value - mean);
        }
        const double stddev = n > 1 ? std::sqrt(squares / (n - 1)) : 0.0;

        CHECK(stats.min == doctest::Approx(lo).epsilon(1e-12));
        CHECK(stats.max == doctest::Approx(hi).epsilon(1e-12));
        CHECK(stats.mean == doctest::Approx(mean).epsilon(1e-12));
        CHECK(stats.stddev == doctest::Approx(stddev).epsilon(1e-12));
        CHECK(stats.min <= stats.mean);
        CHECK(stats.mean <= stats.max);
    }
}

TEST_CASE("run scores round-trip through JSON") {
    RunScore score = apply_rubric({{1, 2}, {7, 1}, {9, 1}}, Rubric::builtin());
    score.run_id = "B-seed1";
    score.model = "B";
    score.seed = 1;
    score.scorer = Scorer::llm_judge;
    score.rationales[1] = "agent_1 (2): credible";
    const RunScore loaded = score_from_json(score_to_json(score));
    CHECK(loaded.run_id == score.run_id);
    CHECK(loaded.total == score.total);
    CHECK(loaded.raw_awards == score.raw_awards);
    CHECK(loaded.effective_awards == score.effective_awards);
    CHECK(loaded.rationales == score.rationales);
    CHECK(loaded.scorer == Scorer::llm_judge);
}

TEST_CASE("the report renders one row per model") {
    std::vector<ReportRow> rows = {
        {aggregate("A", {1, 5, 2}), 0},
        {aggregate("B", {4, 7, 5}), 1},
    };
    const std::string text = render_report(rows);
    CHECK(text.find("Model") != std::string::npos);
    CHECK(text.find("A") != std::string::npos);
    CHECK(text.find("cap bound in 1 run(s)") != std::string::npos);
    const auto machine = report_to_json(rows);
    REQUIRE(machine.size() == 2);
    CHECK(machine[1]["model"] == "B");
}
