// aida command line: run experiments, score transcripts, report results,
// validate corpora, and record cassettes. Everything goes through the
// public C API of the shared library.

#include <aida/aida.h>

#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <string>

namespace {

void print_log_line(const char* line, void* /*user_data*/) {
    std::cout << line << '\n';
}

struct EngineHandle {
    aida_engine* engine = nullptr;
    ~EngineHandle() { aida_engine_destroy(engine); }
};

int fail_with(const EngineHandle& handle, aida_status status) {
    const char* message = aida_engine_last_error(handle.engine);
    if (message != nullptr && *message != '\0') {
        std::cerr << "error: " << message << '\n';
    }
    return static_cast<int>(status);
}

int make_engine(EngineHandle& handle, const std::string& config_path) {
    const aida_status status =
        aida_engine_create(config_path.empty() ? nullptr : config_path.c_str(), &handle.engine);
    if (status != AIDA_OK) {
        return fail_with(handle, status);
    }
    aida_engine_set_log_callback(handle.engine, print_log_line, nullptr);
    return 0;
}

int apply_common(EngineHandle& handle, const std::string& backend_mode,
                 const std::string& cassette, const std::string& out_dir) {
    if (!backend_mode.empty()) {
        const aida_status status = aida_engine_set_backend(
            handle.engine, backend_mode.c_str(), cassette.empty() ? nullptr : cassette.c_str());
        if (status != AIDA_OK) {
            return fail_with(handle, status);
        }
    }
    if (!out_dir.empty()) {
        const aida_status status = aida_engine_set_output_dir(handle.engine, out_dir.c_str());
        if (status != AIDA_OK) {
            return fail_with(handle, status);
        }
    }
    return 0;
}

int run_command(const std::string& config, const std::string& model, const std::string& seed,
                const std::string& backend, const std::string& cassette, const std::string& out,
                bool force, bool record_mode) {
    EngineHandle handle;
    if (int rc = make_engine(handle, config); rc != 0) {
        return rc;
    }
    const std::string mode = record_mode ? "record" : backend;
    if (int rc = apply_common(handle, mode, cassette, out); rc != 0) {
        return rc;
    }
    int completed = 0;
    int failed = 0;
    int skipped = 0;
    const aida_status status =
        aida_engine_run(handle.engine, model.empty() ? nullptr : model.c_str(),
                        seed.empty() ? nullptr : seed.c_str(), force ? 1 : 0, &completed, &failed,
                        &skipped);
    std::cout << "completed " << completed << ", failed " << failed << ", skipped " << skipped
              << '\n';
    if (status != AIDA_OK) {
        return fail_with(handle, status);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aida — analogy-driven multi-agent design dialogues"};
    app.require_subcommand(1);

    std::string config;
    std::string model;
    std::string seed;
    std::string backend = "replay";
    std::string cassette;
    std::string out;
    std::string runs_dir;
    std::string rubric;
    std::string scores;
    std::string judge_model;
    std::string mode = "import";
    std::string corpus_path;
    bool force = false;

    auto* run = app.add_subcommand("run", "Run the experiment matrix");
    run->add_option("--config", config, "Experiment config file")->required();
    run->add_option("--model", model, "Comma-separated model subset (A..H)");
    run->add_option("--seed", seed, "Comma-separated seed subset");
    run->add_option("--backend", backend, "Backend mode")
        ->check(CLI::IsMember({"live", "replay", "record"}));
    run->add_option("--cassette", cassette, "Cassette path override");
    run->add_option("--out", out, "Output directory override");
    run->add_flag("--force", force, "Re-run even when a valid transcript exists");

    auto* record = app.add_subcommand("record", "Run live while writing replay cassettes");
    record->add_option("--config", config, "Experiment config file")->required();
    record->add_option("--model", model, "Comma-separated model subset (A..H)");
    record->add_option("--seed", seed, "Comma-separated seed subset");
    record->add_option("--cassette", cassette, "Cassette path override");
    record->add_option("--out", out, "Output directory override");
    record->add_flag("--force", force, "Re-run even when a valid transcript exists");

    auto* eval = app.add_subcommand("eval", "Score transcripts against the rubric");
    eval->add_option("--config", config, "Experiment config file (needed for judge mode)");
    eval->add_option("--runs", runs_dir, "Runs directory (default: config output dir)");
    eval->add_option("--mode", mode, "import (human scores) or judge (LLM)")
        ->check(CLI::IsMember({"import", "judge"}));
    eval->add_option("--scores", scores, "Human-score CSV for import mode");
    eval->add_option("--rubric", rubric, "Rubric JSON (default: built-in)");
    eval->add_option("--judge-model", judge_model, "Judge model override");
    eval->add_option("--backend", backend, "Backend mode for judge")
        ->check(CLI::IsMember({"live", "replay", "record"}));
    eval->add_option("--cassette", cassette, "Cassette path override");

    auto* report = app.add_subcommand("report", "Summarize scored runs per model");
    report->add_option("--config", config, "Experiment config file");
    report->add_option("--runs", runs_dir, "Runs directory (default: config output dir)");
    report->add_option("--out", out, "Directory for report.txt / report.json");

    auto* corpus_check = app.add_subcommand("corpus-check", "Validate a corpus manifest");
    corpus_check->add_option("--corpus", corpus_path, "Corpus manifest path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (run->parsed()) {
        return run_command(config, model, seed, backend, cassette, out, force, false);
    }
    if (record->parsed()) {
        return run_command(config, model, seed, backend, cassette, out, force, true);
    }

    if (eval->parsed()) {
        EngineHandle handle;
        if (int rc = make_engine(handle, config); rc != 0) {
            return rc;
        }
        if (mode == "judge") {
            if (int rc = apply_common(handle, backend, cassette, ""); rc != 0) {
                return rc;
            }
            int scored = 0;
            int skipped = 0;
            const aida_status status = aida_engine_eval_judge(
                handle.engine, runs_dir.empty() ? nullptr : runs_dir.c_str(),
                rubric.empty() ? nullptr : rubric.c_str(),
                judge_model.empty() ? nullptr : judge_model.c_str(), &scored, &skipped);
            std::cout << "scored " << scored << ", skipped " << skipped << '\n';
            return status == AIDA_OK ? 0 : fail_with(handle, status);
        }
        if (scores.empty()) {
            std::cerr << "error: import mode needs --scores\n";
            return 2;
        }
        int scored = 0;
        const aida_status status = aida_engine_eval_import(
            handle.engine, runs_dir.empty() ? nullptr : runs_dir.c_str(), scores.c_str(),
            rubric.empty() ? nullptr : rubric.c_str(), &scored);
        std::cout << "scored " << scored << '\n';
        return status == AIDA_OK ? 0 : fail_with(handle, status);
    }

    if (report->parsed()) {
        EngineHandle handle;
        if (int rc = make_engine(handle, config); rc != 0) {
            return rc;
        }
        char* text = nullptr;
        const aida_status status =
            aida_engine_report(handle.engine, runs_dir.empty() ? nullptr : runs_dir.c_str(),
                               out.empty() ? nullptr : out.c_str(), &text);
        if (status != AIDA_OK) {
            return fail_with(handle, status);
        }
        std::cout << text;
        aida_string_free(text);
        return 0;
    }

    if (corpus_check->parsed()) {
        char* text = nullptr;
        const aida_status status = aida_corpus_check(corpus_path.c_str(), &text);
        if (text != nullptr) {
            (status == AIDA_OK ? std::cout : std::cerr) << text << '\n';
            aida_string_free(text);
        }
        return static_cast<int>(status);
    }

    return 2;
}
