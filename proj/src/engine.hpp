#pragma once

#include "evaluation.hpp"
#include "experiment.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace aida {

struct RunSummary {
    int completed = 0;
    int failed = 0;
    int skipped = 0;
};

struct EvalSummary {
    int scored = 0;
    int skipped = 0;
};

struct ReportResult {
    std::string text;
    std::vector<ReportRow> rows;
};

/// Command workflows behind the public C surface: run the matrix, score
/// transcripts, and summarize. One engine per loaded configuration.
class Engine {
public:
    /// Without a config path the engine starts from built-in defaults,
    /// which is enough for eval/report on an existing runs directory.
    explicit Engine(const std::optional<std::filesystem::path>& config_path);

    const ExperimentConfig& config() const { return config_; }

    void set_log(std::function<void(const std::string&)> log) { log_ = std::move(log); }

    /// mode: live | replay | record | scripted. The optional cassette
    /// path overrides the configured one for replay/record.
    void set_backend_mode(const std::string& mode,
                          const std::optional<std::filesystem::path>& cassette = std::nullopt);
    void set_output_dir(const std::filesystem::path& dir) { config_.output_dir = dir; }

    /// Empty filters mean "all configured". Filters are comma-separated
    /// model names / seed integers; unknown names are config errors.
    RunSummary run(const std::string& model_filter, const std::string& seed_filter, bool force);

    EvalSummary eval_import(const std::optional<std::filesystem::path>& runs_dir,
                            const std::filesystem::path& scores_csv,
                            const std::optional<std::filesystem::path>& rubric_path);

    EvalSummary eval_judge(const std::optional<std::filesystem::path>& runs_dir,
                           const std::optional<std::filesystem::path>& rubric_path,
                           const std::string& judge_model_override);

    ReportResult report(const std::optional<std::filesystem::path>& runs_dir,
                        const std::optional<std::filesystem::path>& out_dir);

private:
    std::shared_ptr<Backend> make_backend();
    Rubric load_rubric(const std::optional<std::filesystem::path>& rubric_path) const;
    std::vector<std::filesystem::path> find_transcripts(const std::filesystem::path& runs_dir) const;
    void log(const std::string& line) const;

    ExperimentConfig config_;
    std::string backend_mode_ = "replay";
    std::optional<std::filesystem::path> cassette_override_;
    std::function<void(const std::string&)> log_;
};

/// Validates a corpus manifest and returns a human-readable summary.
/// Throws on structural problems.
std::string corpus_check(const std::filesystem::path& manifest_path);

}  // namespace aida
