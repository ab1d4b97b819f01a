#include "dialogue.hpp"

#include "errors.hpp"
#include "scripted_backend.hpp"
#include "support.hpp"
#include "util.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace aida;

namespace {

struct RunFixture {
    RunClock clock;
    ScriptedBackend backend;
    Corpus corpus = test::mini_corpus();
    std::vector<std::unique_ptr<Agent>> agents;
    OrgGraph graph;

    RunFixture(int n, bool internal) {
        std::vector<std::string> ids;
        for (int i = 1; i <= n; ++i) {
            ids.push_back("agent_" + std::to_string(i));
        }
        graph = OrgGraph::flat(ids);
        for (const auto& id : ids) {
            AgentConfig agent_config;
            agent_config.agent_id = id;
            agent_config.has_internal_state = internal;
            agents.push_back(std::make_unique<Agent>(agent_config, backend,
                                                     LlmProfile{"test-model", 0.7, 1, 512}, clock,
                                                     corpus.target_domain, corpus.source_domain));
        }
    }
};

std::map<EventKind, int> count_kinds(const Transcript& transcript, Phase phase) {
    std::map<EventKind, int> counts;
    for (const auto& event : transcript.events()) {
        if (event.phase == phase) {
            ++counts[event.kind];
        }
    }
    return counts;
}

}  // namespace

TEST_CASE("render_prompt substitutes domains and rejects missing vars") {
    const std::map<std::string, std::string> vars = {
        {"target", "household fan"}, {"source", "ejector"}, {"limit", "170"}, {"documents", "DOCS"}};
    const std::string phase_a = render_prompt(Phase::A, vars);
    CHECK(phase_a.find("The target domain for this session is household fan.") !=
          std::string::npos);
    CHECK(phase_a.find("The source domain is ejector.") != std::string::npos);
    CHECK(phase_a.find("DOCS") != std::string::npos);
    CHECK(phase_a.find("respond within 170 words") != std::string::npos);

    const std::string phase_d = render_prompt(Phase::D, {{"limit", "170"}});
    CHECK(phase_d.find("unforeseen significant challenges") != std::string::npos);

    CHECK_THROWS_WITH_AS(render_prompt(Phase::A, {{"target", "fan"}, {"limit", "170"}}),
                         doctest::Contains("missing variable"), Error);
}

TEST_CASE("a single internal agent produces prompt, statement and thought events") {
    DialogueConfig config;
    for (Phase phase : kDiscussionPhases) {
        config.rounds_per_phase[phase] = 1;
    }
    RunFixture fixture(1, true);
    DialogueOrchestrator orchestrator(fixture.agents, fixture.graph, fixture.corpus, config,
                                      {"run-1", "B", 1, "digest"}, fixture.clock);
    orchestrator.run_preparation();
    orchestrator.run_phase(Phase::A);

    const auto counts = count_kinds(orchestrator.transcript(), Phase::A);
    CHECK(counts.at(EventKind::prompt_issued) == 1);
    CHECK(counts.at(EventKind::statement) == 1);
    CHECK(counts.at(EventKind::thought_updated) == 1);
    CHECK(counts.count(EventKind::reaction) == 0);  // no peers to react to
}

TEST_CASE("a three-agent flat round yields 1 prompt, 3 statements, 3 reactions, 3 thoughts") {
    DialogueConfig config;
    for (Phase phase : kDiscussionPhases) {
        config.rounds_per_phase[phase] = 1;
    }
    RunFixture fixture(3, true);
    DialogueOrchestrator orchestrator(fixture.agents, fixture.graph, fixture.corpus, config,
                                      {"run-3", "D", 1, "digest"}, fixture.clock);
    orchestrator.run_preparation();
    orchestrator.run_phase(Phase::A);

    const auto counts = count_kinds(orchestrator.transcript(), Phase::A);
    CHECK(counts.at(EventKind::prompt_issued) == 1);
    CHECK(counts.at(EventKind::statement) == 3);
    CHECK(counts.at(EventKind::reaction) == 3);
    CHECK(counts.at(EventKind::thought_updated) == 3);

    // Statements arrive in fixed agent-index order.
    std::vector<std::string> speakers;
    for (const auto& event : orchestrator.transcript().events()) {
        if (event.kind == EventKind::statement && event.phase == Phase::A) {
            speakers.push_back(event.agent_id);
        }
    }
    CHECK(speakers == std::vector<std::string>{"agent_1", "agent_2", "agent_3"});
}

TEST_CASE("phases must run in order after Preparation") {
    DialogueConfig config;
    RunFixture fixture(1, false);
    DialogueOrchestrator orchestrator(fixture.agents, fixture.graph, fixture.corpus, config,
                                      {"run-o", "A", 1, "digest"}, fixture.clock);
    CHECK_THROWS_AS(orchestrator.run_phase(Phase::A), Error);
    orchestrator.run_preparation();
    CHECK_THROWS_AS(orchestrator.run_phase(Phase::B), Error);
    orchestrator.run_phase(Phase::A);
    CHECK_THROWS_AS(orchestrator.run_phase(Phase::A), Error);
    orchestrator.run_phase(Phase::B);
}

TEST_CASE("run_all covers all six stages in order") {
    DialogueConfig config;
    for (Phase phase : kDiscussionPhases) {
        config.rounds_per_phase[phase] = 1;
    }
    RunFixture fixture(1, false);
    DialogueOrchestrator orchestrator(fixture.agents, fixture.graph, fixture.corpus, config,
                                      {"run-all", "A", 1, "digest"}, fixture.clock);
    const Transcript transcript = orchestrator.run_all();
    CHECK(transcript.valid());

    std::vector<Phase> seen;
    for (const auto& event : transcript.events()) {
        if (seen.empty() || seen.back() != event.phase) {
            seen.push_back(event.phase);
        }
    }
    CHECK(seen == std::vector<Phase>{Phase::Preparation, Phase::A, Phase::B, Phase::C, Phase::D,
                                     Phase::E});
}

TEST_CASE("identical seeds and backends reproduce the transcript byte for byte") {
    auto run_once = [] {
        DialogueConfig config;
        for (Phase phase : kDiscussionPhases) {
            config.rounds_per_phase[phase] = 1;
        }
        RunFixture fixture(3, true);
        DialogueOrchestrator orchestrator(fixture.agents, fixture.graph, fixture.corpus, config,
                                          {"det", "E", 5, "digest"}, fixture.clock);
        return orchestrator.run_all().to_jsonl();
    };
    CHECK(run_once() == run_once());
}

TEST_CASE("a corpus without source documents is rejected") {
    DialogueConfig config;
    RunFixture fixture(1, false);
    Corpus broken = fixture.corpus;
    broken.documents.pop_back();  // drop the ejector document
    std::vector<std::unique_ptr<Agent>> agents;
    RunClock clock;
    ScriptedBackend backend;
    AgentConfig agent_config;
    agent_config.agent_id = "agent_1";
    agents.push_back(std::make_unique<Agent>(agent_config, backend,
                                             LlmProfile{"test-model", 0.7, 1, 512}, clock,
                                             broken.target_domain, broken.source_domain));
    CHECK_THROWS_AS(DialogueOrchestrator(agents, OrgGraph::flat({"agent_1"}), broken, config,
                                         {"bad", "A", 1, "d"}, clock),
                    Error);
}

TEST_CASE("backend failure aborts the run with a flagged transcript") {
    DialogueConfig config;
    for (Phase phase : kDiscussionPhases) {
        config.rounds_per_phase[phase] = 1;
    }
    RunClock clock;
    // Enough canned replies for Preparation-free agents; first statement
    // succeeds, everything after throws.
    test::SequenceBackend backend({"statement one"});
    Corpus corpus = test::mini_corpus();
    std::vector<std::unique_ptr<Agent>> agents;
    for (const auto& id : {"agent_1", "agent_2"}) {
        AgentConfig agent_config;
        agent_config.agent_id = id;
        agents.push_back(std::make_unique<Agent>(agent_config, backend,
                                                 LlmProfile{"test-model", 0.7, 1, 512}, clock,
                                                 corpus.target_domain, corpus.source_domain));
    }
    DialogueOrchestrator orchestrator(agents, OrgGraph::flat({"agent_1", "agent_2"}), corpus,
                                      config, {"abort", "C", 1, "d"}, clock);
    const Transcript transcript = orchestrator.run_all();
    CHECK_FALSE(transcript.valid());
    bool saw_fatal = false;
    for (const auto& event : transcript.events()) {
        if (event.kind == EventKind::error && event.payload.value("fatal", false)) {
            saw_fatal = true;
        }
    }
    CHECK(saw_fatal);
}

TEST_CASE("transcript append rejects clock and phase-order violations") {
    Transcript transcript{{"guard", "A", 1, "d"}};
    TranscriptEvent first;
    first.timestamp = 5;
    first.phase = Phase::B;
    first.kind = EventKind::prompt_issued;
    first.agent_id = "facilitator";
    first.payload = {{"text", "x"}};
    transcript.append(first);

    TranscriptEvent stale = first;
    stale.timestamp = 5;
    CHECK_THROWS_AS(transcript.append(stale), Error);

    TranscriptEvent backwards = first;
    backwards.timestamp = 6;
    backwards.phase = Phase::A;
    CHECK_THROWS_AS(transcript.append(backwards), Error);

    TranscriptEvent onwards = first;
    onwards.timestamp = 6;
    onwards.phase = Phase::C;
    CHECK_NOTHROW(transcript.append(onwards));
}

TEST_CASE("transcripts round-trip through JSONL") {
    DialogueConfig config;
    for (Phase phase : kDiscussionPhases) {
        config.rounds_per_phase[phase] = 1;
    }
    RunFixture fixture(1, true);
    DialogueOrchestrator orchestrator(fixture.agents, fixture.graph, fixture.corpus, config,
                                      {"rt", "B", 9, "cfg"}, fixture.clock);
    const Transcript transcript = orchestrator.run_all();

    test::TempDir dir("transcript");
    const auto path = dir.path() / "transcript.jsonl";
    transcript.save(path);
    const Transcript loaded = Transcript::load(path);
    CHECK(loaded.header().run_id == "rt");
    CHECK(loaded.header().seed == 9);
    CHECK(loaded.events().size() == transcript.events().size());
    CHECK(loaded.to_jsonl() == transcript.to_jsonl());
}

TEST_CASE("broadcast reaches exactly the out-neighbors on sparse graphs") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        std::vector<std::string> ids;
        for (int i = 1; i <= n; ++i) {
            ids.push_back("agent_" + std::to_string(i));
        }
        OrgGraph graph;
        for (const auto& id : ids) {
            graph.add_vertex(id);
        }
        for (const auto& from : ids) {
            for (const auto& to : ids) {
                if (from != to && rng() % 2 == 0) {
                    graph.add_edge(from, to);
                }
            }
        }

        DialogueConfig config;
        for (Phase phase : kDiscussionPhases) {
            config.rounds_per_phase[phase] = 1;
        }
        config.reactions_enabled = false;
        RunClock clock;
        ScriptedBackend backend;
        Corpus corpus = test::mini_corpus();
        std::vector<std::unique_ptr<Agent>> agents;
        for (const auto& id : ids) {
            AgentConfig agent_config;
            agent_config.agent_id = id;
            agents.push_back(std::make_unique<Agent>(agent_config, backend,
                                                     LlmProfile{"test-model", 0.7, 1, 512}, clock,
                                                     corpus.target_domain, corpus.source_domain));
        }
        DialogueOrchestrator orchestrator(agents, graph, corpus, config,
                                          {"sparse", "X", 3, "d"}, clock);
        orchestrator.run_preparation();
        orchestrator.run_phase(Phase::A);

        // Every conversation record must have flowed along a real edge.
        for (std::size_t i = 0; i < agents.size(); ++i) {
            for (const auto& record :
                 agents[i]->memory().by_kind(RecordKind::conversation_turn)) {
                if (record.author == "facilitator" || record.author == ids[i]) {
                    continue;
                }
                CHECK(graph.can_communicate(record.author, ids[i]));
            }
        }

        // And each statement was heard by exactly the speaker's out-neighbors.
        for (const auto& event : orchestrator.transcript().events()) {
            if (event.kind != EventKind::statement) {
                continue;
            }
            const std::string text = event.payload.value("text", "");
            int hearers = 0;
            for (std::size_t i = 0; i < agents.size(); ++i) {
                if (ids[i] == event.agent_id) {
                    continue;
                }
                for (const auto& record :
                     agents[i]->memory().by_kind(RecordKind::conversation_turn)) {
                    if (record.author == event.agent_id &&
                        record.content == event.agent_id + ": " + text) {
                        ++hearers;
                        break;
                    }
                }
            }
            CHECK(hearers == static_cast<int>(graph.out_neighbors(event.agent_id).size()));
        }
    }
}
