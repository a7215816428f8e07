/*
 * duraseg C API.
 *
 * Every function returns a ds_status. On failure a description of the most
 * recent error on the calling thread is available from ds_last_error().
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Strings returned through char** are allocated by
 * the library and released with ds_string_free.
 *
 * Frame indices are 0-based. Times are in seconds.
 */
#ifndef DURASEG_DURASEG_H
#define DURASEG_DURASEG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DURASEG_BUILDING_LIBRARY)
#define DURASEG_API __declspec(dllexport)
#else
#define DURASEG_API __declspec(dllimport)
#endif
#else
#define DURASEG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ds_status {
  DS_OK = 0,
  DS_ERR_BAD_INPUT = 1,
  DS_ERR_IO = 2,
  DS_ERR_PARSE = 3,
  DS_ERR_ALL_SILENCE = 4,
  DS_ERR_INVARIANT = 5,
  DS_ERR_INFEASIBLE_PHRASE = 6,
  DS_ERR_INFEASIBLE_SYLLABLE = 7,
  DS_ERR_INFEASIBLE_ALIGNMENT = 8,
  DS_ERR_BAD_PATH = 9,
  DS_ERR_TOO_LARGE = 10,
  DS_ERR_DEGENERATE_SUPPORT = 11,
  DS_ERR_EMPTY_PHRASE = 12,
  DS_ERR_ONSET_OUT_OF_RANGE = 13,
  DS_ERR_BUFFER_TOO_SMALL = 14,
  DS_ERR_INTERNAL = 15
} ds_status;

typedef enum ds_level { DS_LEVEL_SYLLABLE = 0, DS_LEVEL_PHONEME = 1 } ds_level;

typedef struct ds_params {
  double gamma;         /* prior sigma / mu, default 0.35 */
  double epsilon;       /* emission floor, default 1e-10 */
  double tol_seconds;   /* onset match tolerance, default 0.025 */
  double hop_seconds;   /* frame hop, default 0.01 */
} ds_params;

typedef struct ds_onset_result {
  size_t true_positives;
  size_t false_positives;
  size_t false_negatives;
  double precision;
  double recall;
  double f1;
} ds_onset_result;

typedef struct ds_level_report {
  double precision;
  double recall;
  double f1;
  double segmentation;
} ds_level_report;

typedef struct ds_annotation ds_annotation;
typedef struct ds_odf ds_odf;
typedef struct ds_emissions ds_emissions;
typedef struct ds_targets ds_targets;
typedef struct ds_evaluator ds_evaluator;
typedef struct ds_sim_config ds_sim_config;

/* ---- errors and common ---- */
DURASEG_API const char* ds_last_error(void);
DURASEG_API const char* ds_status_name(ds_status status);
/* Nonzero for statuses caused by an input that cannot satisfy the duration
 * constraints, as opposed to malformed input. */
DURASEG_API int ds_status_is_infeasible(ds_status status);
DURASEG_API void ds_params_default(ds_params* params);
DURASEG_API void ds_string_free(char* text);
DURASEG_API const char* ds_version(void);

/* ---- annotations ---- */
DURASEG_API ds_status ds_annotation_load(const char* path, ds_annotation** out);
DURASEG_API ds_status ds_annotation_parse(const char* json, ds_annotation** out);
DURASEG_API ds_status ds_annotation_save(const ds_annotation* annotation, const char* path);
DURASEG_API ds_status ds_annotation_to_json(const ds_annotation* annotation, char** json);
DURASEG_API void ds_annotation_free(ds_annotation* annotation);
DURASEG_API ds_status ds_annotation_merge_silences(const ds_annotation* raw, ds_annotation** out);
DURASEG_API const char* ds_annotation_phrase_id(const ds_annotation* annotation);
DURASEG_API size_t ds_annotation_count(const ds_annotation* annotation, ds_level level);
/* Writes up to `capacity` onset times; `count` receives the number available. */
DURASEG_API ds_status ds_annotation_onsets(const ds_annotation* annotation, ds_level level, double* onsets,
                                           size_t capacity, size_t* count);

/* ---- onset detection functions ---- */
DURASEG_API ds_status ds_odf_load(const char* path, ds_odf** out);
DURASEG_API ds_status ds_odf_create(double hop_seconds, double phrase_start, const double* syllable,
                                    const double* phoneme, size_t n_frames, ds_odf** out);
DURASEG_API ds_status ds_odf_save(const ds_odf* odf, const char* path);
DURASEG_API size_t ds_odf_frames(const ds_odf* odf);
DURASEG_API void ds_odf_free(ds_odf* odf);

/* ---- a-priori duration model ---- */
DURASEG_API ds_status ds_prior_log_density(double mu_seconds, double gamma, double d_seconds, double* out);

/* ---- duration-informed onset decoder ---- */
/* `onsets` must hold n_durations - 1 entries. */
DURASEG_API ds_status ds_decode_onsets(const double* odf, size_t n_frames, double hop_seconds,
                                       const double* durations, size_t n_durations, const ds_params* params,
                                       size_t* onsets, double* score);
DURASEG_API ds_status ds_score_path(const double* odf, size_t n_frames, double hop_seconds,
                                    const double* durations, size_t n_durations, const size_t* onsets,
                                    const ds_params* params, double* score);

/* Hierarchical syllable-then-phoneme segmentation. The teacher annotation is
 * silence-merged internally. On DS_ERR_INFEASIBLE_SYLLABLE, `failed_syllable`
 * (if not NULL) receives the syllable index. */
DURASEG_API ds_status ds_segment(const ds_odf* odf, const ds_annotation* teacher, const ds_params* params,
                                 ds_annotation** out, size_t* failed_syllable);

/* ---- HSMM forced-alignment baseline ---- */
DURASEG_API ds_status ds_emissions_load(const char* path, double hop_seconds, ds_emissions** out);
DURASEG_API ds_status ds_emissions_save(const ds_emissions* emissions, const char* path);
DURASEG_API size_t ds_emissions_frames(const ds_emissions* emissions);
DURASEG_API size_t ds_emissions_states(const ds_emissions* emissions);
DURASEG_API void ds_emissions_free(ds_emissions* emissions);
/* Occupancy support is 1..ceil((mu + 4 sigma) / hop) frames. */
DURASEG_API ds_status ds_align(const ds_emissions* emissions, const ds_annotation* teacher,
                               const ds_params* params, double phrase_start, ds_annotation** out);
/* Raw interface: row-major frames x states log probabilities, one mean
 * duration per state. `max_frames` = 0 selects the default support.
 * `durations` receives n_states frame counts. */
DURASEG_API ds_status ds_hsmm_align(const double* log_probs, size_t n_frames, size_t n_states,
                                    const double* mu_seconds, const ds_params* params, size_t max_frames,
                                    size_t* durations, double* score);

/* ---- evaluation ---- */
DURASEG_API ds_status ds_onset_prf(const double* detected, size_t n_detected, const double* reference,
                                   size_t n_reference, double tol_seconds, ds_onset_result* out);
DURASEG_API ds_status ds_segmentation_accuracy(const ds_annotation* detected, const ds_annotation* reference,
                                               ds_level level, double* out);
DURASEG_API ds_status ds_evaluator_create(double tol_seconds, ds_evaluator** out);
DURASEG_API ds_status ds_evaluator_add(ds_evaluator* evaluator, const ds_annotation* reference,
                                       const ds_annotation* detected);
DURASEG_API ds_status ds_evaluator_report(const ds_evaluator* evaluator, ds_level level, ds_level_report* out);
/* `levels`: bit 0 syllable, bit 1 phoneme. */
DURASEG_API ds_status ds_evaluator_report_json(const ds_evaluator* evaluator, unsigned levels, char** json);
DURASEG_API size_t ds_evaluator_phrases(const ds_evaluator* evaluator);
DURASEG_API void ds_evaluator_free(ds_evaluator* evaluator);

/* ---- training targets ---- */
/* n_frames = 0 sizes the grid to the annotation. The annotation is
 * silence-merged internally. */
DURASEG_API ds_status ds_targets_create(const ds_annotation* annotation, double hop_seconds, size_t n_frames,
                                        ds_targets** out);
DURASEG_API size_t ds_targets_frames(const ds_targets* targets);
DURASEG_API ds_status ds_targets_get(const ds_targets* targets, ds_level level, size_t frame, int* label,
                                     double* weight);
DURASEG_API ds_status ds_targets_save_csv(const ds_targets* targets, const char* path);
DURASEG_API void ds_targets_free(ds_targets* targets);

/* ---- simulation ---- */
DURASEG_API ds_status ds_sim_config_default(ds_sim_config** out);
DURASEG_API ds_status ds_sim_config_load(const char* path, ds_sim_config** out);
DURASEG_API ds_status ds_sim_config_parse(const char* json, ds_sim_config** out);
DURASEG_API ds_status ds_sim_config_set_seed(ds_sim_config* config, uint64_t seed);
DURASEG_API void ds_sim_config_free(ds_sim_config* config);
/* Writes teacher/, student/, odf/, emissions/ and manifest.json into dir. */
DURASEG_API ds_status ds_simulate(const ds_sim_config* config, const char* dir);
/* Any output pointer may be NULL. */
DURASEG_API ds_status ds_sim_phrase(const ds_sim_config* config, size_t index, ds_annotation** teacher,
                                    ds_annotation** student, ds_odf** odf, ds_emissions** emissions);

/* ---- benchmark and plotting ---- */
DURASEG_API ds_status ds_bench(const size_t* frames, size_t n_frames, const size_t* segments,
                               size_t n_segments, size_t repeats, uint64_t seed, char** csv);
DURASEG_API ds_status ds_plot_data_save(const ds_odf* odf, const ds_annotation* result, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* DURASEG_DURASEG_H */
