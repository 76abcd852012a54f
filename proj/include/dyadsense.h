/* dyadsense: C interface to the dyadic sensing toolkit.
 *
 * Every function returns a ds_status; on failure ds_last_error() holds a
 * human-readable message for the calling thread. Strings returned through
 * char** out-parameters are heap copies owned by the caller; release them
 * with ds_string_free. Handles are opaque and single-writer: concurrent
 * mutation of one handle is not supported, distinct handles are
 * independent.
 */
#ifndef DYADSENSE_H
#define DYADSENSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DS_BUILD_SHARED)
#define DS_API __declspec(dllexport)
#else
#define DS_API __declspec(dllimport)
#endif
#else
#define DS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ds_status {
  DS_OK = 0,
  DS_ERR_INVALID_ARGUMENT = 1,
  DS_ERR_CONFIG = 2,
  DS_ERR_IO = 3,
  DS_ERR_PARSE = 4,
  DS_ERR_MODEL = 5,
  DS_ERR_STREAM = 6,
  DS_ERR_TRAINING = 7,
  DS_ERR_SCHEMA = 8,
  DS_ERR_INTERNAL = 9
} ds_status;

/* Proximity phase values used across the API. */
#define DS_PHASE_UNKNOWN 0
#define DS_PHASE_NEAR 1
#define DS_PHASE_FAR 2

/* Message for the last failing call on this thread; never NULL. */
DS_API const char* ds_last_error(void);
/* Semantic version string, e.g. "0.1.0". */
DS_API const char* ds_version(void);
DS_API void ds_string_free(char* s);
/* "error", "warn", "info" or "debug"; anything else is DS_ERR_CONFIG. */
DS_API ds_status ds_set_log_level(const char* level);

/* ---- configuration ------------------------------------------------- */

typedef struct ds_config ds_config;

DS_API ds_status ds_config_create(ds_config** out); /* built-in defaults */
DS_API ds_status ds_config_load(const char* path, ds_config** out);
/* Applies one key: ds_config_set(cfg, "vad", "epochs", "10"). */
DS_API ds_status ds_config_set(ds_config* cfg, const char* section,
                               const char* key, const char* value);
/* 16 hex digits over the canonical serialization. */
DS_API ds_status ds_config_hash(const ds_config* cfg, char** out);
DS_API void ds_config_free(ds_config* cfg);

/* ---- audio features ------------------------------------------------- */

/* Reads a 16-bit mono PCM WAV (sample rate must match the config), writes
 * per-frame coefficients. as_jsonl = 0 writes CSV columns
 * frame_index,timestamp,c0..cK; nonzero writes one JSON object per line. */
DS_API ds_status ds_mfcc_file(const ds_config* cfg, const char* wav_path,
                              const char* out_path, int as_jsonl);

typedef struct ds_mfcc_stream ds_mfcc_stream;

DS_API ds_status ds_mfcc_stream_create(const ds_config* cfg,
                                       ds_mfcc_stream** out);
DS_API ds_status ds_mfcc_stream_push(ds_mfcc_stream* s, const double* samples,
                                     size_t n);
/* Pops the next pending frame into values (room for num_coefficients
 * doubles); *has_frame = 0 when nothing is pending. */
DS_API ds_status ds_mfcc_stream_pop(ds_mfcc_stream* s, double* values,
                                    size_t values_len, int64_t* frame_index,
                                    double* timestamp, double* log_energy,
                                    int* has_frame);
DS_API void ds_mfcc_stream_free(ds_mfcc_stream* s);

/* ---- linear classifier ---------------------------------------------- */

typedef struct ds_svm_model ds_svm_model;

DS_API ds_status ds_svm_load(const char* path, ds_svm_model** out);
DS_API ds_status ds_svm_save(const ds_svm_model* m, const char* path);
/* x is row-major rows*cols, y holds +1/-1. */
DS_API ds_status ds_svm_train(const double* x, size_t rows, size_t cols,
                              const int* y, double lambda, int epochs,
                              uint64_t seed, ds_svm_model** out);
DS_API ds_status ds_svm_dim(const ds_svm_model* m, size_t* dim);
/* Decision score; the predicted label is +1 iff score > 0. */
DS_API ds_status ds_svm_score(const ds_svm_model* m, const double* x, size_t n,
                              double* score);
DS_API void ds_svm_free(ds_svm_model* m);

/* ---- proximity ------------------------------------------------------ */

typedef struct ds_proximity ds_proximity;

DS_API ds_status ds_proximity_create(const ds_config* cfg, ds_proximity** out);
/* Feeds one RSSI sample. Up to cap committed transitions are written to
 * trans_t/trans_phase; *count is the number produced (at most 2). */
DS_API ds_status ds_proximity_update(ds_proximity* p, double t, double rssi,
                                     double* trans_t, int* trans_phase,
                                     size_t cap, size_t* count);
/* Staleness check without a sample; *count is 0 or 1. */
DS_API ds_status ds_proximity_poll(ds_proximity* p, double t, double* trans_t,
                                   int* trans_phase, size_t* count);
DS_API ds_status ds_proximity_phase(const ds_proximity* p, int* phase);
DS_API void ds_proximity_free(ds_proximity* p);

/* ---- trigger machine ------------------------------------------------ */

typedef struct ds_trigger ds_trigger;

DS_API ds_status ds_trigger_create(const ds_config* cfg, ds_trigger** out);
DS_API ds_status ds_trigger_on_proximity(ds_trigger* f, double t, int phase);
DS_API ds_status ds_trigger_on_speech(ds_trigger* f, double t, int active);
DS_API ds_status ds_trigger_on_tick(ds_trigger* f, double t);
DS_API ds_status ds_trigger_suspend(ds_trigger* f, double t);
DS_API ds_status ds_trigger_resume(ds_trigger* f, double t);
/* Full action log so far, one JSON object per line. */
DS_API ds_status ds_trigger_actions_jsonl(const ds_trigger* f, char** out);
DS_API void ds_trigger_free(ds_trigger* f);

/* Number of slots whose closed window lies inside the merged uptime
 * intervals given as parallel start/end arrays. */
DS_API ds_status ds_trigger_expected_count(const ds_config* cfg,
                                           const double* up_start,
                                           const double* up_end, size_t n,
                                           int* expected);

/* ---- file-level pipeline operations --------------------------------- */

/* Trains the frame classifier on a CSV with a trailing integer label
 * column and writes the model JSON. */
DS_API ds_status ds_vad_train_file(const ds_config* cfg, const char* csv_path,
                                   uint64_t seed, const char* model_out);

/* Runs WAV -> features -> classifier -> hysteresis smoothing and writes
 * detected segments as CSV start,end. */
DS_API ds_status ds_vad_run_file(const ds_config* cfg, const char* wav_path,
                                 const char* model_path,
                                 const char* segments_out);

/* Balanced accuracy of the model on eval rows vs the best energy-threshold
 * baseline fit on train rows; result is a JSON object. */
DS_API ds_status ds_vad_eval_file(const ds_config* cfg, const char* train_csv,
                                  const char* eval_csv, const char* model_path,
                                  char** report_json);

/* Replays a JSONL event stream ({"t","event",...}) through a fresh trigger
 * machine and returns the action log as JSONL. */
DS_API ds_status ds_trigger_replay_file(const ds_config* cfg,
                                        const char* events_path,
                                        char** actions_jsonl);

/* Runs num_scenarios seeded scenarios through the full pipeline and
 * returns the battery report JSON. dump_dir, when non-NULL, receives one
 * trace directory per scenario. */
DS_API ds_status ds_sim_run_battery(const ds_config* cfg,
                                    const char* vad_model_path,
                                    int num_scenarios, uint64_t base_seed,
                                    const char* dump_dir, char** report_json);

/* Renders a battery report JSON to text (as_csv = 0) or per-scenario CSV. */
DS_API ds_status ds_sim_report_render(const char* report_json, int as_csv,
                                      char** out);

/* Writes a labeled frame corpus (c0..cK,log_energy,label) synthesized from
 * alternating voiced/noise audio. */
DS_API ds_status ds_synth_vad_corpus(const ds_config* cfg, double duration,
                                     uint64_t seed, const char* csv_out);

/* Writes synthetic emotion-session features and labels CSVs. */
DS_API ds_status ds_synth_emotion_data(const ds_config* cfg, int num_sessions,
                                       uint64_t seed,
                                       const char* features_csv_out,
                                       const char* labels_csv_out);

/* axis: "valence" or "arousal"; model_type: "svm" or "forest". */
DS_API ds_status ds_emotion_train_file(const ds_config* cfg,
                                       const char* features_csv,
                                       const char* labels_csv,
                                       const char* axis,
                                       const char* model_type, uint64_t seed,
                                       const char* model_out);

/* Balanced accuracy of an emotion model on labeled sessions; result is a
 * JSON object. allow_imputation substitutes training means for absent
 * features instead of failing. */
DS_API ds_status ds_emotion_eval_file(const ds_config* cfg,
                                      const char* features_csv,
                                      const char* labels_csv,
                                      const char* model_path,
                                      int allow_imputation,
                                      char** report_json);

/* Builds one session's feature row. hr_jsonl ({"t","bpm"}), imu_jsonl
 * ({"t","ax".."gz"}), wav_path, and segments_csv (start,end rows gating
 * the acoustic functionals) may each be NULL for an absent modality. */
DS_API ds_status ds_extract_features_file(
    const ds_config* cfg, const char* session_id, const char* hr_jsonl,
    const char* imu_jsonl, const char* wav_path, const char* segments_csv,
    const char* features_csv_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DYADSENSE_H */
