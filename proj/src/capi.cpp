#include "aida/aida.h"

#include "engine.hpp"
#include "errors.hpp"

#include <cstring>
#include <new>
#include <optional>
#include <string>

struct aida_engine {
    std::optional<aida::Engine> impl;
    std::string last_error;
    aida_log_callback log_callback = nullptr;
    void* log_user = nullptr;
};

namespace {

std::optional<std::filesystem::path> opt_path(const char* value) {
    if (value == nullptr || *value == '\0') {
        return std::nullopt;
    }
    return std::filesystem::path(value);
}

std::string opt_string(const char* value) {
    return value == nullptr ? std::string() : std::string(value);
}

char* dup_string(const std::string& text) {
    char* out = new (std::nothrow) char[text.size() + 1];
    if (out != nullptr) {
        std::memcpy(out, text.c_str(), text.size() + 1);
    }
    return out;
}

aida_status status_of(const aida::Error& error) {
    switch (error.code()) {
        case aida::Errc::config_error:
        case aida::Errc::invalid_spec:
        case aida::Errc::missing_variable:
        case aida::Errc::missing_domain:
            return AIDA_ERR_CONFIG;
        default:
            return AIDA_ERR_RUNTIME;
    }
}

// Runs `fn` and converts exceptions into status codes + last_error.
template <typename Fn>
aida_status guarded(aida_engine* engine, Fn&& fn) {
    if (engine == nullptr) {
        return AIDA_ERR_CONFIG;
    }
    engine->last_error.clear();
    try {
        return fn();
    } catch (const aida::Error& ex) {
        engine->last_error = ex.what();
        return status_of(ex);
    } catch (const std::exception& ex) {
        engine->last_error = ex.what();
        return AIDA_ERR_RUNTIME;
    }
}

}  // namespace

extern "C" {

const char* aida_version(void) {
    return "0.1.0";
}

aida_status aida_engine_create(const char* config_path, aida_engine** out_engine) {
    if (out_engine == nullptr) {
        return AIDA_ERR_CONFIG;
    }
    *out_engine = nullptr;
    auto* engine = new (std::nothrow) aida_engine();
    if (engine == nullptr) {
        return AIDA_ERR_RUNTIME;
    }
    const aida_status status = guarded(engine, [&] {
        engine->impl.emplace(opt_path(config_path));
        return AIDA_OK;
    });
    // Hand the handle back even on failure; last_error stays readable until
    // the caller destroys it.
    *out_engine = engine;
    return status;
}

void aida_engine_destroy(aida_engine* engine) {
    delete engine;
}

const char* aida_engine_last_error(const aida_engine* engine) {
    return engine == nullptr ? "" : engine->last_error.c_str();
}

void aida_engine_set_log_callback(aida_engine* engine, aida_log_callback callback,
                                  void* user_data) {
    if (engine == nullptr) {
        return;
    }
    engine->log_callback = callback;
    engine->log_user = user_data;
    if (engine->impl) {
        if (callback == nullptr) {
            engine->impl->set_log({});
        } else {
            engine->impl->set_log([engine](const std::string& line) {
                engine->log_callback(line.c_str(), engine->log_user);
            });
        }
    }
}

aida_status aida_engine_set_backend(aida_engine* engine, const char* mode,
                                    const char* cassette_path) {
    return guarded(engine, [&] {
        aida::require(engine->impl.has_value(), aida::Errc::config_error, "engine not initialized");
        aida::require(mode != nullptr && *mode != '\0', aida::Errc::config_error,
                      "backend mode is required");
        engine->impl->set_backend_mode(mode, opt_path(cassette_path));
        return AIDA_OK;
    });
}

aida_status aida_engine_set_output_dir(aida_engine* engine, const char* dir) {
    return guarded(engine, [&] {
        aida::require(engine->impl.has_value(), aida::Errc::config_error, "engine not initialized");
        aida::require(dir != nullptr && *dir != '\0', aida::Errc::config_error,
                      "output dir is required");
        engine->impl->set_output_dir(dir);
        return AIDA_OK;
    });
}

aida_status aida_engine_run(aida_engine* engine, const char* model_filter,
                            const char* seed_filter, int force, int* out_completed,
                            int* out_failed, int* out_skipped) {
    return guarded(engine, [&] {
        aida::require(engine->impl.has_value(), aida::Errc::config_error, "engine not initialized");
        const aida::RunSummary summary =
            engine->impl->run(opt_string(model_filter), opt_string(seed_filter), force != 0);
        if (out_completed != nullptr) {
            *out_completed = summary.completed;
        }
        if (out_failed != nullptr) {
            *out_failed = summary.failed;
        }
        if (out_skipped != nullptr) {
            *out_skipped = summary.skipped;
        }
        if (summary.failed > 0) {
            engine->last_error = std::to_string(summary.failed) + " run(s) failed";
            return AIDA_ERR_RUNTIME;
        }
        return AIDA_OK;
    });
}

aida_status aida_engine_eval_import(aida_engine* engine, const char* runs_dir,
                                    const char* scores_csv, const char* rubric_path,
                                    int* out_scored) {
    return guarded(engine, [&] {
        aida::require(engine->impl.has_value(), aida::Errc::config_error, "engine not initialized");
        aida::require(scores_csv != nullptr && *scores_csv != '\0', aida::Errc::config_error,
                      "a scores file is required in import mode");
        const aida::EvalSummary summary =
            engine->impl->eval_import(opt_path(runs_dir), scores_csv, opt_path(rubric_path));
        if (out_scored != nullptr) {
            *out_scored = summary.scored;
        }
        if (summary.scored == 0) {
            engine->last_error = "nothing scorable";
            return AIDA_ERR_RUNTIME;
        }
        return AIDA_OK;
    });
}

aida_status aida_engine_eval_judge(aida_engine* engine, const char* runs_dir,
                                   const char* rubric_path, const char* judge_model,
                                   int* out_scored, int* out_skipped) {
    return guarded(engine, [&] {
        aida::require(engine->impl.has_value(), aida::Errc::config_error, "engine not initialized");
        const aida::EvalSummary summary = engine->impl->eval_judge(
            opt_path(runs_dir), opt_path(rubric_path), opt_string(judge_model));
        if (out_scored != nullptr) {
            *out_scored = summary.scored;
        }
        if (out_skipped != nullptr) {
            *out_skipped = summary.skipped;
        }
        if (summary.scored == 0) {
            engine->last_error = "nothing scorable";
            return AIDA_ERR_RUNTIME;
        }
        return AIDA_OK;
    });
}

aida_status aida_engine_report(aida_engine* engine, const char* runs_dir, const char* out_dir,
                               char** out_text) {
    return guarded(engine, [&] {
        aida::require(engine->impl.has_value(), aida::Errc::config_error, "engine not initialized");
        const aida::ReportResult result =
            engine->impl->report(opt_path(runs_dir), opt_path(out_dir));
        if (out_text != nullptr) {
            *out_text = dup_string(result.text);
        }
        return AIDA_OK;
    });
}

aida_status aida_corpus_check(const char* manifest_path, char** out_report) {
    if (manifest_path == nullptr || *manifest_path == '\0') {
        return AIDA_ERR_CONFIG;
    }
    try {
        const std::string report = aida::corpus_check(manifest_path);
        if (out_report != nullptr) {
            *out_report = dup_string(report);
        }
        return AIDA_OK;
    } catch (const aida::Error& ex) {
        if (out_report != nullptr) {
            *out_report = dup_string(ex.what());
        }
        return ex.code() == aida::Errc::io_error ? AIDA_ERR_CONFIG : AIDA_ERR_RUNTIME;
    } catch (const std::exception& ex) {
        if (out_report != nullptr) {
            *out_report = dup_string(ex.what());
        }
        return AIDA_ERR_RUNTIME;
    }
}

void aida_string_free(char* text) {
    delete[] text;
}

}  // extern "C"
