/* C interface to the ddpdeid de-identification toolkit.
 *
 * Every function that can fail returns a ddpdeid_status. On failure the
 * message is available from ddpdeid_last_error() on the same thread until the
 * next call into the library. Strings returned through char** out-parameters
 * are owned by the caller and released with ddpdeid_free_string().
 */
#ifndef DDPDEID_DDPDEID_H
#define DDPDEID_DDPDEID_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DDPDEID_API __declspec(dllexport)
#else
#define DDPDEID_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ddpdeid_status {
  DDPDEID_OK = 0,
  DDPDEID_E_INPUT = 1,     /* unreadable or invalid input, config or key file */
  DDPDEID_E_INVARIANT = 2, /* a data invariant failed, e.g. a code collision */
  DDPDEID_E_ARGUMENT = 3,  /* invalid argument passed to the API */
  DDPDEID_E_INTERNAL = 4   /* unexpected failure */
} ddpdeid_status;

/* Index order of per-category arrays. */
typedef enum ddpdeid_category {
  DDPDEID_CAT_USERNAME = 0,
  DDPDEID_CAT_NAME = 1,
  DDPDEID_CAT_EMAIL = 2,
  DDPDEID_CAT_PHONE = 3,
  DDPDEID_CAT_URL = 4,
  DDPDEID_CAT_DDP_ID = 5,
  DDPDEID_CAT_COUNT = 6
} ddpdeid_category;

DDPDEID_API const char* ddpdeid_version(void);
DDPDEID_API const char* ddpdeid_last_error(void);
/* Empty string for an out-of-range value. */
DDPDEID_API const char* ddpdeid_category_name(ddpdeid_category category);
/* "trace", "debug", "info", "warn", "error", "critical" or "off". */
DDPDEID_API ddpdeid_status ddpdeid_set_log_level(const char* level);
DDPDEID_API void ddpdeid_free_string(char* s);

/* Lexical predicates. */
DDPDEID_API int ddpdeid_is_username_like(const char* s);
DDPDEID_API int ddpdeid_is_timestamp(const char* s);

/* De-identification run. */
typedef struct ddpdeid_run_options ddpdeid_run_options;

typedef struct ddpdeid_run_summary {
  size_t ddps;
  size_t text_files;
  size_t media_files;
  size_t placeholders;
  size_t media_omitted;
  size_t discarded;
  size_t keys;
  uint64_t replacements[DDPDEID_CAT_COUNT];
} ddpdeid_run_summary;

DDPDEID_API ddpdeid_run_options* ddpdeid_run_options_new(void);
DDPDEID_API void ddpdeid_run_options_free(ddpdeid_run_options* opts);
DDPDEID_API ddpdeid_status ddpdeid_run_options_add_input(ddpdeid_run_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_output(ddpdeid_run_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_participants(ddpdeid_run_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_names(ddpdeid_run_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_cap_sensitive(ddpdeid_run_options* opts, int enabled);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_salt(ddpdeid_run_options* opts, const char* hex);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_save_keys(ddpdeid_run_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_store_salt(ddpdeid_run_options* opts, int enabled);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_detections(ddpdeid_run_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_skip_media(ddpdeid_run_options* opts, int enabled);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_discard_list(ddpdeid_run_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_exempt_labels(ddpdeid_run_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_sender_labels(ddpdeid_run_options* opts, const char* path);
/* Four-character codec tag for re-encoded videos; "mp4v" by default. */
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_video_fourcc(ddpdeid_run_options* opts, const char* fourcc);
DDPDEID_API ddpdeid_status ddpdeid_run_options_set_workers(ddpdeid_run_options* opts, unsigned workers);
/* summary may be NULL. */
DDPDEID_API ddpdeid_status ddpdeid_run(const ddpdeid_run_options* opts, ddpdeid_run_summary* summary);

/* Evaluation against ground truth. */
typedef struct ddpdeid_eval_options ddpdeid_eval_options;

typedef struct ddpdeid_counts {
  uint64_t tp;
  uint64_t fp;
  uint64_t fn;
} ddpdeid_counts;

DDPDEID_API ddpdeid_eval_options* ddpdeid_eval_options_new(void);
DDPDEID_API void ddpdeid_eval_options_free(ddpdeid_eval_options* opts);
DDPDEID_API ddpdeid_status ddpdeid_eval_options_set_raw(ddpdeid_eval_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_eval_options_set_deid(ddpdeid_eval_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_eval_options_set_keys(ddpdeid_eval_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_eval_options_set_ground_truth(ddpdeid_eval_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_eval_options_set_report(ddpdeid_eval_options* opts, const char* path);
DDPDEID_API ddpdeid_status ddpdeid_eval_options_set_participants(ddpdeid_eval_options* opts, const char* path);
/* Replacement report of the run; defaults to <deid>/deid_report.csv. */
DDPDEID_API ddpdeid_status ddpdeid_eval_options_set_rewrite_report(ddpdeid_eval_options* opts, const char* path);
/* totals may be NULL; otherwise it receives DDPDEID_CAT_COUNT entries. */
DDPDEID_API ddpdeid_status ddpdeid_eval(const ddpdeid_eval_options* opts, ddpdeid_counts* totals);

/* Synthetic corpus; spec_path may be NULL for the default spec. */
DDPDEID_API ddpdeid_status ddpdeid_gen(uint64_t seed, const char* out_dir, const char* spec_path);

/* Metrics. A flag of 0 marks an undefined value (zero denominator). */
typedef struct ddpdeid_metrics {
  double recall;
  double precision;
  double f1;
  int recall_defined;
  int precision_defined;
  int f1_defined;
} ddpdeid_metrics;

DDPDEID_API ddpdeid_status ddpdeid_compute_metrics(ddpdeid_counts counts, ddpdeid_metrics* out);
/* Fixed-point with `decimals` digits, or "-" when undefined. */
DDPDEID_API ddpdeid_status ddpdeid_format_metric(double value, int defined, int decimals, char** out);

/* Key map. */
typedef struct ddpdeid_keymap ddpdeid_keymap;

/* salt_hex may be NULL for a random salt. */
DDPDEID_API ddpdeid_status ddpdeid_keymap_new(const char* salt_hex, ddpdeid_keymap** out);
DDPDEID_API ddpdeid_status ddpdeid_keymap_load(const char* path, ddpdeid_keymap** out);
DDPDEID_API void ddpdeid_keymap_free(ddpdeid_keymap* km);
DDPDEID_API size_t ddpdeid_keymap_size(const ddpdeid_keymap* km);
/* Category names as in ddpdeid_category_name(). */
DDPDEID_API ddpdeid_status ddpdeid_keymap_assign(ddpdeid_keymap* km, const char* category, const char* value,
                                                 char** code);
DDPDEID_API ddpdeid_status ddpdeid_keymap_save(const ddpdeid_keymap* km, const char* path, int store_salt,
                                               int cap_sensitive);
/* Rewrites one structured text document with the key map and the default
 * e-mail, phone and URL patterns. */
DDPDEID_API ddpdeid_status ddpdeid_deidentify_text(const ddpdeid_keymap* km, const char* text, size_t len,
                                                   int cap_sensitive, char** out, size_t* out_len);

#ifdef __cplusplus
}
#endif

#endif
