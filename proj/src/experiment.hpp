#pragma once

#include "agent.hpp"
#include "backend.hpp"
#include "dialogue.hpp"
#include "organization.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace aida {

enum class Motivation { none, homogeneous, heterogeneous };

const char* to_string(Motivation motivation);

/// One ablation cell: team size, internal-state switch and motivation mix.
/// Only the eight presets A-H are constructible via preset().
struct ModelSpec {
    std::string name;
    int n_agents = 1;
    bool internal_state = false;
    Motivation motivation = Motivation::none;

    /// Throws Errc::invalid_spec when the combination is inconsistent
    /// (motivation none iff internal_state false, team size in {1,3,5}).
    void validate() const;

    static ModelSpec preset(const std::string& name);
    static const std::vector<std::string>& preset_names();
};

/// The three weight profiles a heterogeneous team mixes. Config-overridable;
/// the mixes are one novelty-seeker/one balanced/one consensus-seeker at
/// n=3 and two/one/two at n=5.
struct WeightProfiles {
    MotivationWeights novelty_seeker{2.0, 1.0, 0.5};
    MotivationWeights balanced{1.0, 1.0, 1.0};
    MotivationWeights consensus_seeker{0.5, 1.0, 2.0};
};

struct AgentDefaults {
    int statement_word_limit = 170;
    int reaction_word_limit = 50;
    int ideas_per_generation = 3;
    int top_m_ideas = 1;
    int assembly_budget_words = 3000;
    std::string persona;
};

struct BackendConfig {
    std::string endpoint = "https://api.openai.com/v1";
    std::string model_id = "gpt-4o";
    double temperature = 0.7;
    int max_tokens = 1024;
    std::string api_key_env = "AIDA_API_KEY";
    std::filesystem::path cassette;  // replay source / record destination
    RetryPolicy retry;
};

struct JudgeConfig {
    std::string model_id = "gpt-4o";
    int min_agreeing = 0;  // 0 = ceil(n/2)
};

/// Team topology: the "flat" preset (complete digraph) or an explicit edge
/// list whose endpoints must exist in the model being built.
struct OrgConfig {
    std::string preset = "flat";
    struct Edge {
        std::string from;
        std::string to;
        EdgeKind kind = EdgeKind::communication;
    };
    std::vector<Edge> edges;  // non-empty overrides the preset
};

struct ExperimentConfig {
    std::vector<ModelSpec> models;       // default: all eight presets
    std::vector<std::int64_t> seeds;     // default: 1..10, all distinct
    std::filesystem::path corpus_path;
    std::filesystem::path output_dir = "runs";
    int workers = 0;                     // 0 = one per model
    DialogueConfig dialogue;
    AgentDefaults agent;
    WeightProfiles profiles;
    BackendConfig backend;
    JudgeConfig judge;
    OrgConfig organization;
    std::string config_digest;  // of the canonical file content; provenance

    static ExperimentConfig defaults();

    /// Parses the JSON config file; relative paths resolve against the
    /// file's directory. Throws Errc::config_error / Errc::parse_error.
    static ExperimentConfig load(const std::filesystem::path& path);

    void validate() const;
};

/// Agent blueprints plus topology for one (model, seed) cell: the
/// configured graph, weights per the model's motivation mix.
struct ModelBuild {
    std::vector<AgentConfig> agent_configs;
    OrgGraph graph;
};

ModelBuild build_model(const ModelSpec& spec, const ExperimentConfig& config);

std::string run_id_for(const ModelSpec& spec, std::int64_t seed);

struct RunOutcome {
    std::string model;
    std::int64_t seed = 0;
    std::filesystem::path transcript_path;
    bool ok = false;
    bool skipped = false;  // valid transcript already on disk
    std::string error;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Executes one dialogue for a (spec, seed) cell and writes
/// `<out>/<model>/<seed>/transcript.jsonl`. Does not throw on backend
/// failure; the partial transcript is persisted flagged invalid.
RunOutcome run_one(const ModelSpec& spec, std::int64_t seed, const ExperimentConfig& config,
                   Backend& backend, const Corpus& corpus);

/// The whole matrix (models x seeds) on a worker pool. Existing valid
/// transcripts are skipped unless `force`; per-run failures are collected,
/// never fatal. Outcomes come back in deterministic (model, seed) order.
std::vector<RunOutcome> run_matrix(const ExperimentConfig& config, Backend& backend, bool force,
                                   const ProgressFn& progress = {});

}  // namespace aida
