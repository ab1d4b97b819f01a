// Development helper: replays the whole experiment matrix against the
// deterministic scripted provider while recording, producing the bundled
// cassette that makes `run --backend replay` work offline.
//
//   aida_fixturegen <config.json> <cassette.jsonl> [models] [seeds]

#include "engine.hpp"
#include "errors.hpp"
#include "scripted_backend.hpp"
#include "util.hpp"

#include <filesystem>
#include <iostream>
#include <memory>

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: aida_fixturegen <config.json> <cassette.jsonl> [models] [seeds]\n";
        return 2;
    }
    const std::filesystem::path config_path = argv[1];
    const std::filesystem::path cassette_path = argv[2];

    // Identical requests recur across models and cells; the resulting
    // overwrite warnings are expected here, so count instead of printing.
    std::size_t overwrites = 0;
    aida::set_warn_handler([&overwrites](const std::string& message) {
        if (message.rfind("cassette:", 0) == 0) {
            ++overwrites;
        } else {
            std::cerr << "warning: " << message << '\n';
        }
    });

    try {
        aida::ExperimentConfig config = aida::ExperimentConfig::load(config_path);
        if (argc > 3) {
            std::vector<aida::ModelSpec> models;
            std::string name;
            for (char c : std::string(argv[3]) + ",") {
                if (c == ',') {
                    if (!name.empty()) {
                        models.push_back(aida::ModelSpec::preset(name));
                    }
                    name.clear();
                } else {
                    name += c;
                }
            }
            config.models = std::move(models);
        }
        if (argc > 4) {
            std::vector<std::int64_t> seeds;
            std::string number;
            for (char c : std::string(argv[4]) + ",") {
                if (c == ',') {
                    if (!number.empty()) {
                        seeds.push_back(std::stoll(number));
                    }
                    number.clear();
                } else {
                    number += c;
                }
            }
            config.seeds = std::move(seeds);
        }
        // Transcripts land in a scratch dir; only the cassette is the product.
        config.output_dir = std::filesystem::temp_directory_path() / "aida_fixturegen_runs";
        std::filesystem::remove_all(config.output_dir);
        std::filesystem::remove(cassette_path);

        aida::RecordBackend backend(std::make_shared<aida::ScriptedBackend>(), cassette_path);
        const auto outcomes = aida::run_matrix(config, backend, true, [](const std::string& line) {
            std::cout << line << '\n';
        });

        // A judge pass over every transcript so judge-mode replay works too.
        aida::Rubric rubric = aida::Rubric::builtin();
        for (const auto& outcome : outcomes) {
            if (!outcome.ok) {
                std::cerr << "fixture run failed: " << outcome.model << " seed " << outcome.seed
                          << ": " << outcome.error << '\n';
                return 1;
            }
            const auto transcript = aida::Transcript::load(outcome.transcript_path);
            aida::judge(transcript, rubric, backend, config.judge.model_id);
        }
        std::cout << "cassette written to " << cassette_path.string() << " (" << overwrites
                  << " duplicate exchanges collapsed on replay)\n";
        return 0;
    } catch (const std::exception& ex) {
        std::cerr << "fixturegen failed: " << ex.what() << '\n';
        return 1;
    }
}
