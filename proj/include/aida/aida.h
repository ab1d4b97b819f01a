/* aida — multi-agent analogy-driven design dialogue engine.
 *
 * C interface of the shared library. All engine state lives behind the
 * opaque aida_engine handle; functions return aida_status and leave a
 * descriptive message in aida_engine_last_error(). Strings returned through
 * char** out-parameters are owned by the caller and released with
 * aida_string_free().
 *
 * A handle must not be used from two threads at once; the engine
 * parallelizes internally where it is safe to do so.
 */

#ifndef AIDA_H
#define AIDA_H

#ifdef __cplusplus
extern "C" {
#endif

#ifndef AIDA_API
#if defined(_WIN32)
#define AIDA_API __declspec(dllexport)
#else
#define AIDA_API __attribute__((visibility("default")))
#endif
#endif

typedef enum aida_status {
    AIDA_OK = 0,
    AIDA_ERR_RUNTIME = 1, /* operation ran but failed (failed runs, nothing scorable, ...) */
    AIDA_ERR_CONFIG = 2,  /* bad usage, unreadable/invalid configuration or arguments */
} aida_status;

typedef struct aida_engine aida_engine;

typedef void (*aida_log_callback)(const char* line, void* user_data);

AIDA_API const char* aida_version(void);

/* Creates an engine from a JSON experiment config. config_path may be NULL,
 * which loads built-in defaults (enough for eval/report on existing runs). */
AIDA_API aida_status aida_engine_create(const char* config_path, aida_engine** out_engine);
AIDA_API void aida_engine_destroy(aida_engine* engine);

/* Message describing the most recent failure on this handle. Valid until
 * the next call on the handle. */
AIDA_API const char* aida_engine_last_error(const aida_engine* engine);

AIDA_API void aida_engine_set_log_callback(aida_engine* engine, aida_log_callback callback,
                                           void* user_data);

/* mode: "live", "replay" or "record". cassette_path may be NULL to use the
 * configured cassette. */
AIDA_API aida_status aida_engine_set_backend(aida_engine* engine, const char* mode,
                                             const char* cassette_path);

AIDA_API aida_status aida_engine_set_output_dir(aida_engine* engine, const char* dir);

/* Runs the (models x seeds) matrix. model_filter / seed_filter are
 * comma-separated subsets, NULL or "" for all. Existing valid transcripts
 * are skipped unless force. Returns AIDA_ERR_RUNTIME when any run failed;
 * the counters are filled either way. */
AIDA_API aida_status aida_engine_run(aida_engine* engine, const char* model_filter,
                                     const char* seed_filter, int force, int* out_completed,
                                     int* out_failed, int* out_skipped);

/* Imports human scores (CSV: run_id,c1..c9 with header) and writes one
 * score.json next to each matching transcript. rubric_path NULL = built-in
 * rubric. runs_dir NULL = the configured output directory. */
AIDA_API aida_status aida_engine_eval_import(aida_engine* engine, const char* runs_dir,
                                             const char* scores_csv, const char* rubric_path,
                                             int* out_scored);

/* Scores every valid transcript with the LLM judge through the configured
 * backend mode. judge_model NULL = configured judge model. */
AIDA_API aida_status aida_engine_eval_judge(aida_engine* engine, const char* runs_dir,
                                            const char* rubric_path, const char* judge_model,
                                            int* out_scored, int* out_skipped);

/* Renders the per-model min/max/mean/std table over scored runs. When
 * out_dir is non-NULL, writes report.txt and report.json there. The table
 * text is returned through out_text (caller frees). */
AIDA_API aida_status aida_engine_report(aida_engine* engine, const char* runs_dir,
                                        const char* out_dir, char** out_text);

/* Validates a corpus manifest; no engine needed. On success fills a
 * summary, on failure the diagnostic, both caller-freed. */
AIDA_API aida_status aida_corpus_check(const char* manifest_path, char** out_report);

AIDA_API void aida_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* AIDA_H */
