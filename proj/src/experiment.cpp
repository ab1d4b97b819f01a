#include "experiment.hpp"

#include "errors.hpp"
#include "util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>

namespace aida {

using nlohmann::json;

const char* to_string(Motivation motivation) {
    switch (motivation) {
        case Motivation::none: return "none";
        case Motivation::homogeneous: return "homogeneous";
        case Motivation::heterogeneous: return "heterogeneous";
    }
    return "?";
}

void ModelSpec::validate() const {
    require(n_agents == 1 || n_agents == 3 || n_agents == 5, Errc::invalid_spec,
            "team size must be 1, 3 or 5");
    if (internal_state) {
        require(motivation != Motivation::none, Errc::invalid_spec,
                "internal-state agents need a motivation mix");
    } else {
        require(motivation == Motivation::none, Errc::invalid_spec,
                "motivation requires an internal state");
    }
    if (motivation == Motivation::heterogeneous) {
        require(n_agents > 1, Errc::invalid_spec, "a single agent cannot be heterogeneous");
    }
}

ModelSpec ModelSpec::preset(const std::string& name) {
    // The eight ablation cells: (agents, internal state, motivation mix).
    // A single internal-state agent is homogeneous by convention; the
    // hetero/homo distinction needs a team.
    static const ModelSpec presets[] = {
        {"A", 1, false, Motivation::none},
        {"B", 1, true, Motivation::homogeneous},
        {"C", 3, false, Motivation::none},
        {"D", 3, true, Motivation::homogeneous},
        {"E", 3, true, Motivation::heterogeneous},
        {"F", 5, false, Motivation::none},
        {"G", 5, true, Motivation::homogeneous},
        {"H", 5, true, Motivation::heterogeneous},
    };
    for (const auto& preset : presets) {
        if (preset.name == name) {
            return preset;
        }
    }
    fail(Errc::invalid_spec, "unknown model preset: " + name);
}

const std::vector<std::string>& ModelSpec::preset_names() {
    static const std::vector<std::string> names = {"A", "B", "C", "D", "E", "F", "G", "H"};
    return names;
}

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig config;
    for (const auto& name : ModelSpec::preset_names()) {
        config.models.push_back(ModelSpec::preset(name));
    }
    for (std::int64_t seed = 1; seed <= 10; ++seed) {
        config.seeds.push_back(seed);
    }
    config.config_digest = fnv1a_hex("defaults");
    return config;
}

void ExperimentConfig::validate() const {
    require(!models.empty(), Errc::config_error, "no models configured");
    for (const auto& model : models) {
        model.validate();
    }
    require(!seeds.empty(), Errc::config_error, "no seeds configured");
    std::set<std::int64_t> unique(seeds.begin(), seeds.end());
    require(unique.size() == seeds.size(), Errc::config_error, "seeds must be distinct");
    require(!corpus_path.empty(), Errc::config_error, "corpus path not configured");
}

namespace {

MotivationWeights weights_from_json(const json& value) {
    require(value.is_array() && value.size() == 3, Errc::config_error,
            "weight profile must be [novelty, importance, consensus]");
    MotivationWeights weights{value[0].get<double>(), value[1].get<double>(),
                              value[2].get<double>()};
    weights.validate();
    return weights;
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& ex) {
        fail(Errc::config_error, ex.what());
    }
    json parsed;
    try {
        parsed = json::parse(text);
    } catch (const json::exception& ex) {
        fail(Errc::config_error, "config " + path.string() + ": " + ex.what());
    }

    ExperimentConfig config;
    // Provenance digest over the canonical file content; CLI overrides
    // (model/seed filters, output dir) do not change it.
    config.config_digest = fnv1a_hex(json::parse(text).dump());
    const auto base = path.parent_path();
    auto resolve = [&](const std::filesystem::path& p) {
        return p.is_absolute() ? p : base / p;
    };

    try {
        if (parsed.contains("models")) {
            for (const auto& name : parsed["models"]) {
                config.models.push_back(ModelSpec::preset(name.get<std::string>()));
            }
        } else {
            for (const auto& name : ModelSpec::preset_names()) {
                config.models.push_back(ModelSpec::preset(name));
            }
        }
        if (parsed.contains("seeds")) {
            for (const auto& seed : parsed["seeds"]) {
                config.seeds.push_back(seed.get<std::int64_t>());
            }
        } else {
            for (std::int64_t seed = 1; seed <= 10; ++seed) {
                config.seeds.push_back(seed);
            }
        }
        config.corpus_path = resolve(parsed.at("corpus").get<std::string>());
        if (parsed.contains("output_dir")) {
            config.output_dir = resolve(parsed["output_dir"].get<std::string>());
        }
        config.workers = parsed.value("workers", 0);

        if (parsed.contains("dialogue")) {
            const auto& dialogue = parsed["dialogue"];
            if (dialogue.contains("rounds_per_phase")) {
                const auto& rounds = dialogue["rounds_per_phase"];
                if (rounds.is_number_integer()) {
                    for (Phase phase : kDiscussionPhases) {
                        config.dialogue.rounds_per_phase[phase] = rounds.get<int>();
                    }
                } else {
                    for (Phase phase : kDiscussionPhases) {
                        const char* key = to_string(phase);
                        if (rounds.contains(key)) {
                            config.dialogue.rounds_per_phase[phase] = rounds[key].get<int>();
                        }
                    }
                }
            }
            config.dialogue.reactions_enabled =
                dialogue.value("reactions_enabled", config.dialogue.reactions_enabled);
        }

        if (parsed.contains("agent")) {
            const auto& agent = parsed["agent"];
            config.agent.statement_word_limit =
                agent.value("statement_word_limit", config.agent.statement_word_limit);
            config.agent.reaction_word_limit =
                agent.value("reaction_word_limit", config.agent.reaction_word_limit);
            config.agent.ideas_per_generation =
                agent.value("ideas_per_generation", config.agent.ideas_per_generation);
            config.agent.top_m_ideas = agent.value("top_m_ideas", config.agent.top_m_ideas);
            config.agent.assembly_budget_words =
                agent.value("assembly_budget_words", config.agent.assembly_budget_words);
            config.agent.persona = agent.value("persona", config.agent.persona);
            if (agent.contains("heterogeneous_weights")) {
                const auto& profiles = agent["heterogeneous_weights"];
                if (profiles.contains("novelty_seeker")) {
                    config.profiles.novelty_seeker = weights_from_json(profiles["novelty_seeker"]);
                }
                if (profiles.contains("balanced")) {
                    config.profiles.balanced = weights_from_json(profiles["balanced"]);
                }
                if (profiles.contains("consensus_seeker")) {
                    config.profiles.consensus_seeker =
                        weights_from_json(profiles["consensus_seeker"]);
                }
            }
        }

        if (parsed.contains("backend")) {
            const auto& backend = parsed["backend"];
            config.backend.endpoint = backend.value("endpoint", config.backend.endpoint);
            config.backend.model_id = backend.value("model_id", config.backend.model_id);
            config.backend.temperature = backend.value("temperature", config.backend.temperature);
            config.backend.max_tokens = backend.value("max_tokens", config.backend.max_tokens);
            config.backend.api_key_env = backend.value("api_key_env", config.backend.api_key_env);
            if (backend.contains("cassette")) {
                config.backend.cassette = resolve(backend["cassette"].get<std::string>());
            }
            if (backend.contains("retry")) {
                const auto& retry = backend["retry"];
                config.backend.retry.max_attempts =
                    retry.value("max_attempts", config.backend.retry.max_attempts);
                config.backend.retry.base_delay = std::chrono::milliseconds(
                    retry.value("base_delay_ms", config.backend.retry.base_delay.count()));
                config.backend.retry.max_delay = std::chrono::milliseconds(
                    retry.value("max_delay_ms", config.backend.retry.max_delay.count()));
            }
        }

        if (parsed.contains("judge")) {
            const auto& judge = parsed["judge"];
            config.judge.model_id = judge.value("model_id", config.backend.model_id);
            config.judge.min_agreeing = judge.value("min_agreeing", 0);
        } else {
            config.judge.model_id = config.backend.model_id;
        }

        if (parsed.contains("organization")) {
            const auto& organization = parsed["organization"];
            config.organization.preset = organization.value("preset", "flat");
            require(config.organization.preset == "flat", Errc::config_error,
                    "unknown organization preset: " + config.organization.preset);
            if (organization.contains("edges")) {
                for (const auto& entry : organization["edges"]) {
                    require(entry.is_array() && entry.size() >= 2, Errc::config_error,
                            "organization edge must be [from, to] or [from, to, kind]");
                    OrgConfig::Edge edge;
                    edge.from = entry[0].get<std::string>();
                    edge.to = entry[1].get<std::string>();
                    if (entry.size() > 2) {
                        const std::string kind = entry[2].get<std::string>();
                        require(kind == "communication" || kind == "instruction",
                                Errc::config_error, "unknown edge kind: " + kind);
                        edge.kind = kind == "instruction" ? EdgeKind::instruction
                                                          : EdgeKind::communication;
                    }
                    config.organization.edges.push_back(std::move(edge));
                }
            }
        }
    } catch (const json::exception& ex) {
        fail(Errc::config_error, "config " + path.string() + ": " + ex.what());
    }

    config.validate();
    return config;
}

ModelBuild build_model(const ModelSpec& spec, const ExperimentConfig& config) {
    spec.validate();
    ModelBuild build;
    std::vector<std::string> ids;
    for (int i = 1; i <= spec.n_agents; ++i) {
        ids.push_back("agent_" + std::to_string(i));
    }

    // Heterogeneous mixes: novelty-leaning agents first, consensus-leaning
    // last, balanced in the middle (1+1+1 at n=3, 2+1+2 at n=5).
    std::vector<MotivationWeights> weights(ids.size(), config.profiles.balanced);
    if (spec.motivation == Motivation::heterogeneous) {
        const int half = (spec.n_agents - 1) / 2;
        for (int i = 0; i < half; ++i) {
            weights[static_cast<std::size_t>(i)] = config.profiles.novelty_seeker;
        }
        for (int i = spec.n_agents - half; i < spec.n_agents; ++i) {
            weights[static_cast<std::size_t>(i)] = config.profiles.consensus_seeker;
        }
    }

    for (std::size_t i = 0; i < ids.size(); ++i) {
        AgentConfig agent;
        agent.agent_id = ids[i];
        agent.has_internal_state = spec.internal_state;
        agent.weights = weights[i];
        agent.statement_word_limit = config.agent.statement_word_limit;
        agent.reaction_word_limit = config.agent.reaction_word_limit;
        agent.persona = config.agent.persona;
        agent.ideas_per_generation = config.agent.ideas_per_generation;
        agent.top_m_ideas = config.agent.top_m_ideas;
        agent.assembly_budget_words = config.agent.assembly_budget_words;
        build.agent_configs.push_back(std::move(agent));
    }

    if (config.organization.edges.empty()) {
        build.graph = OrgGraph::flat(ids);
    } else {
        OrgGraph graph;
        for (const auto& id : ids) {
            graph.add_vertex(id);
        }
        for (const auto& edge : config.organization.edges) {
            require(graph.has_vertex(edge.from) && graph.has_vertex(edge.to), Errc::config_error,
                    "organization edge (" + edge.from + ", " + edge.to +
                        ") references an agent outside this model");
            graph.add_edge(edge.from, edge.to, edge.kind);
        }
        build.graph = std::move(graph);
    }
    return build;
}

std::string run_id_for(const ModelSpec& spec, std::int64_t seed) {
    return spec.name + "-seed" + std::to_string(seed);
}

RunOutcome run_one(const ModelSpec& spec, std::int64_t seed, const ExperimentConfig& config,
                   Backend& backend, const Corpus& corpus) {
    RunOutcome outcome;
    outcome.model = spec.name;
    outcome.seed = seed;
    outcome.transcript_path =
        config.output_dir / spec.name / std::to_string(seed) / "transcript.jsonl";

    const ModelBuild build = build_model(spec, config);
    RunClock clock;
    LlmProfile profile{config.backend.model_id, config.backend.temperature, seed,
                       config.backend.max_tokens};

    std::vector<std::unique_ptr<Agent>> agents;
    agents.reserve(build.agent_configs.size());
    for (const auto& agent_config : build.agent_configs) {
        agents.push_back(std::make_unique<Agent>(agent_config, backend, profile, clock,
                                                 corpus.target_domain, corpus.source_domain));
    }

    DialogueConfig dialogue = config.dialogue;
    dialogue.seed = seed;
    Transcript::Header header{run_id_for(spec, seed), spec.name, seed, config.config_digest};
    DialogueOrchestrator orchestrator(agents, build.graph, corpus, dialogue, std::move(header),
                                      clock);

    Transcript transcript = orchestrator.run_all();
    transcript.save(outcome.transcript_path);
    outcome.ok = transcript.valid();
    if (!outcome.ok) {
        for (const auto& event : transcript.events()) {
            if (event.kind == EventKind::error) {
                outcome.error = event.payload.value("message", "run aborted");
            }
        }
    }
    return outcome;
}

std::vector<RunOutcome> run_matrix(const ExperimentConfig& config, Backend& backend, bool force,
                                   const ProgressFn& progress) {
    config.validate();
    const Corpus corpus = Corpus::load(config.corpus_path);

    struct Job {
        ModelSpec spec;
        std::int64_t seed;
        std::size_t slot;
    };
    std::vector<Job> jobs;
    std::vector<RunOutcome> outcomes(config.models.size() * config.seeds.size());
    std::size_t slot = 0;
    for (const auto& spec : config.models) {
        for (const auto seed : config.seeds) {
            jobs.push_back({spec, seed, slot++});
        }
    }

    std::mutex progress_mutex;
    auto report = [&](const std::string& line) {
        if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(line);
        }
    };

    auto execute = [&](const Job& job) {
        RunOutcome& outcome = outcomes[job.slot];
        const auto path =
            config.output_dir / job.spec.name / std::to_string(job.seed) / "transcript.jsonl";
        if (!force && std::filesystem::exists(path)) {
            bool reusable = false;
            try {
                reusable = Transcript::load(path).valid();
            } catch (const Error&) {
                reusable = false;
            }
            if (reusable) {
                outcome = {job.spec.name, job.seed, path, true, true, ""};
                report("skip " + run_id_for(job.spec, job.seed) + " (transcript exists)");
                return;
            }
        }
        report("run  " + run_id_for(job.spec, job.seed));
        try {
            outcome = run_one(job.spec, job.seed, config, backend, corpus);
        } catch (const std::exception& ex) {
            outcome = {job.spec.name, job.seed, path, false, false, ex.what()};
        }
        report((outcome.ok ? "done " : "FAIL ") + run_id_for(job.spec, job.seed) +
               (outcome.error.empty() ? "" : " (" + outcome.error + ")"));
    };

    int width = config.workers > 0 ? config.workers : static_cast<int>(config.models.size());
    width = std::max(1, std::min<int>(width, static_cast<int>(jobs.size())));

    if (width == 1) {
        for (const auto& job : jobs) {
            execute(job);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(width));
        for (int w = 0; w < width; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t index = next.fetch_add(1);
                    if (index >= jobs.size()) {
                        return;
                    }
                    execute(jobs[index]);
                }
            });
        }
        for (auto& worker : pool) {
            worker.join();
        }
    }
    return outcomes;
}

}  // namespace aida
