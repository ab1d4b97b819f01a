#include "engine.hpp"

#include "errors.hpp"
#include "scripted_backend.hpp"
#include "util.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace aida {

namespace {

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto trimmed = trim(item);
        if (!trimmed.empty()) {
            out.emplace_back(trimmed);
        }
    }
    return out;
}

}  // namespace

Engine::Engine(const std::optional<std::filesystem::path>& config_path)
    : config_(config_path ? ExperimentConfig::load(*config_path) : ExperimentConfig::defaults()) {}

void Engine::log(const std::string& line) const {
    if (log_) {
        log_(line);
    }
}

void Engine::set_backend_mode(const std::string& mode,
                              const std::optional<std::filesystem::path>& cassette) {
    require(mode == "live" || mode == "replay" || mode == "record" || mode == "scripted",
            Errc::config_error, "unknown backend mode: " + mode);
    backend_mode_ = mode;
    cassette_override_ = cassette;
}

std::shared_ptr<Backend> Engine::make_backend() {
    const std::filesystem::path cassette =
        cassette_override_ ? *cassette_override_ : config_.backend.cassette;

    if (backend_mode_ == "scripted") {
        return std::make_shared<ScriptedBackend>();
    }
    if (backend_mode_ == "replay") {
        require(!cassette.empty(), Errc::config_error,
                "replay mode needs a cassette path (backend.cassette in the config)");
        return std::make_shared<ReplayBackend>(ReplayBackend::from_file(cassette));
    }

    HttpBackendConfig http;
    http.endpoint = config_.backend.endpoint;
    http.retry = config_.backend.retry;
    const char* key = std::getenv(config_.backend.api_key_env.c_str());
    require(key != nullptr && *key != '\0', Errc::config_error,
            "environment variable " + config_.backend.api_key_env + " is not set");
    http.api_key = key;
    auto live = std::make_shared<HttpBackend>(std::move(http));

    if (backend_mode_ == "record") {
        require(!cassette.empty(), Errc::config_error, "record mode needs a cassette path");
        return std::make_shared<RecordBackend>(live, cassette);
    }
    return live;
}

RunSummary Engine::run(const std::string& model_filter, const std::string& seed_filter,
                       bool force) {
    ExperimentConfig config = config_;

    if (!model_filter.empty()) {
        std::vector<ModelSpec> selected;
        for (const auto& name : split_csv(model_filter)) {
            auto it = std::find_if(config.models.begin(), config.models.end(),
                                   [&](const ModelSpec& m) { return m.name == name; });
            require(it != config.models.end(), Errc::config_error,
                    "unknown or unconfigured model: " + name);
            selected.push_back(*it);
        }
        config.models = std::move(selected);
    }
    if (!seed_filter.empty()) {
        std::vector<std::int64_t> selected;
        for (const auto& item : split_csv(seed_filter)) {
            try {
                selected.push_back(std::stoll(item));
            } catch (const std::exception&) {
                fail(Errc::config_error, "bad seed: " + item);
            }
        }
        config.seeds = std::move(selected);
    }

    auto backend = make_backend();
    const auto outcomes =
        run_matrix(config, *backend, force, [this](const std::string& line) { log(line); });

    RunSummary summary;
    for (const auto& outcome : outcomes) {
        if (outcome.skipped) {
            ++summary.skipped;
        } else if (outcome.ok) {
            ++summary.completed;
        } else {
            ++summary.failed;
        }
    }
    return summary;
}

Rubric Engine::load_rubric(const std::optional<std::filesystem::path>& rubric_path) const {
    return rubric_path ? Rubric::load(*rubric_path) : Rubric::builtin();
}

std::vector<std::filesystem::path> Engine::find_transcripts(
    const std::filesystem::path& runs_dir) const {
    require(std::filesystem::exists(runs_dir), Errc::io_error,
            "runs directory does not exist: " + runs_dir.string());
    std::vector<std::filesystem::path> found;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(runs_dir)) {
        if (entry.is_regular_file() && entry.path().filename() == "transcript.jsonl") {
            found.push_back(entry.path());
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

EvalSummary Engine::eval_import(const std::optional<std::filesystem::path>& runs_dir,
                                const std::filesystem::path& scores_csv,
                                const std::optional<std::filesystem::path>& rubric_path) {
    const auto dir = runs_dir ? *runs_dir : config_.output_dir;
    const Rubric rubric = load_rubric(rubric_path);
    auto scores = import_human_scores(scores_csv, rubric);

    struct Located {
        std::filesystem::path dir;
        Transcript::Header header;
    };
    std::map<std::string, Located> by_run_id;
    for (const auto& path : find_transcripts(dir)) {
        try {
            Transcript transcript = Transcript::load(path);
            if (!transcript.valid()) {
                warn("skipping invalid transcript " + path.string());
                continue;
            }
            by_run_id[transcript.header().run_id] = {path.parent_path(), transcript.header()};
        } catch (const Error& ex) {
            warn("skipping unreadable transcript " + path.string() + ": " + ex.what());
        }
    }

    EvalSummary summary;
    for (auto& score : scores) {
        auto it = by_run_id.find(score.run_id);
        if (it == by_run_id.end()) {
            warn("no transcript for scored run " + score.run_id + "; row skipped");
            ++summary.skipped;
            continue;
        }
        score.model = it->second.header.model;
        score.seed = it->second.header.seed;
        score.config_digest = it->second.header.config_digest;
        write_file(it->second.dir / "score.json", score_to_json(score).dump(2) + "\n");
        log("scored " + score.run_id + ": " + std::to_string(score.total));
        ++summary.scored;
    }
    return summary;
}

EvalSummary Engine::eval_judge(const std::optional<std::filesystem::path>& runs_dir,
                               const std::optional<std::filesystem::path>& rubric_path,
                               const std::string& judge_model_override) {
    const auto dir = runs_dir ? *runs_dir : config_.output_dir;
    const Rubric rubric = load_rubric(rubric_path);
    const std::string judge_model =
        judge_model_override.empty() ? config_.judge.model_id : judge_model_override;
    auto backend = make_backend();

    EvalSummary summary;
    for (const auto& path : find_transcripts(dir)) {
        Transcript transcript;
        try {
            transcript = Transcript::load(path);
            if (!transcript.valid()) {
                warn("skipping invalid transcript " + path.string());
                ++summary.skipped;
                continue;
            }
            RunScore score =
                judge(transcript, rubric, *backend, judge_model, config_.judge.min_agreeing);
            write_file(path.parent_path() / "score.json", score_to_json(score).dump(2) + "\n");
            log("judged " + score.run_id + ": " + std::to_string(score.total));
            ++summary.scored;
        } catch (const Error& ex) {
            warn("cannot judge " + path.string() + ": " + ex.what());
            ++summary.skipped;
        }
    }
    return summary;
}

ReportResult Engine::report(const std::optional<std::filesystem::path>& runs_dir,
                            const std::optional<std::filesystem::path>& out_dir) {
    const auto dir = runs_dir ? *runs_dir : config_.output_dir;
    require(std::filesystem::exists(dir), Errc::io_error,
            "runs directory does not exist: " + dir.string());

    struct ModelScores {
        std::vector<double> totals;
        int cap_bound = 0;
    };
    std::map<std::string, ModelScores> by_model;
    int unscored = 0;
    for (const auto& path : find_transcripts(dir)) {
        const auto score_path = path.parent_path() / "score.json";
        if (!std::filesystem::exists(score_path)) {
            ++unscored;
            continue;
        }
        RunScore score;
        try {
            score = score_from_json(nlohmann::json::parse(read_file(score_path)));
        } catch (const std::exception& ex) {
            warn("skipping unreadable score " + score_path.string() + ": " + ex.what());
            ++unscored;
            continue;
        }
        if (!score.valid) {
            continue;
        }
        std::string model = score.model;
        if (model.empty()) {
            model = score.run_id.substr(0, score.run_id.find('-'));
        }
        by_model[model].totals.push_back(score.total);
        if (score.cap_bound) {
            ++by_model[model].cap_bound;
        }
    }
    if (unscored > 0) {
        warn(std::to_string(unscored) + " transcript(s) have no score and were left out");
    }
    require(!by_model.empty(), Errc::empty_scores, "no scored runs under " + dir.string());

    ReportResult result;
    for (const auto& [model, scores] : by_model) {
        result.rows.push_back({aggregate(model, scores.totals), scores.cap_bound});
    }
    result.text = render_report(result.rows);

    if (out_dir) {
        write_file(*out_dir / "report.txt", result.text);
        write_file(*out_dir / "report.json", report_to_json(result.rows).dump(2) + "\n");
    }
    return result;
}

std::string corpus_check(const std::filesystem::path& manifest_path) {
    const Corpus corpus = Corpus::load(manifest_path);
    std::ostringstream out;
    out << "corpus ok: target domain '" << corpus.target_domain << "', source domain '"
        << corpus.source_domain << "', " << corpus.documents.size() << " document(s)\n";
    for (const auto& doc : corpus.documents) {
        out << "  " << doc.doc_id << " [" << to_string(doc.role) << "] " << doc.title << " ("
            << count_words(doc.body) << " words)\n";
    }
    return out.str();
}

}  // namespace aida
