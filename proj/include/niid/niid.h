/*
 * C interface to the niid library: order-dependence (non-IID) auditing of
 * datasets with a k-nearest-neighbor index-distance permutation test.
 *
 * Conventions
 *   - Objects are opaque handles created by niid_*_create/load/... and
 *     released with the matching niid_*_free. Freeing NULL is a no-op.
 *   - Fallible calls return niid_status. On failure the output handle is
 *     left untouched and niid_last_error() describes the problem. The
 *     message is per-thread and valid until the next failing call on the
 *     same thread.
 *   - Strings returned through char** are heap-allocated and must be
 *     released with niid_string_free.
 *   - Option structs are filled with defaults by their *_init function;
 *     set only the fields you need afterwards.
 */
#ifndef NIID_NIID_H_
#define NIID_NIID_H_

#include <stddef.h>
#include <stdint.h>

#if defined(NIID_BUILDING_LIBRARY)
#define NIID_API __attribute__((visibility("default")))
#else
#define NIID_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum niid_status {
  NIID_OK = 0,
  NIID_E_INVALID_ARGUMENT = 1, /* parameter out of range, unknown name */
  NIID_E_IO = 2,               /* file could not be read or written */
  NIID_E_DATA = 3,             /* malformed or non-finite input data */
  NIID_E_INTERNAL = 4
} niid_status;

typedef enum niid_metric { NIID_METRIC_EUCLIDEAN = 0, NIID_METRIC_COSINE = 1 } niid_metric;

typedef enum niid_format { NIID_FORMAT_CSV = 0, NIID_FORMAT_FBIN = 1 } niid_format;

typedef enum niid_method {
  NIID_METHOD_KNN = 0,
  NIID_METHOD_AUTOCORR = 1, /* averaged Ljung-Box p-values */
  NIID_METHOD_PCA = 2       /* PCA reconstruction-error drift */
} niid_method;

typedef enum niid_scenario_kind {
  NIID_SCENARIO_IID_MIXTURE = 0,
  NIID_SCENARIO_MEAN_SHIFT = 1,
  NIID_SCENARIO_VARIANCE_CHANGEPOINT = 2,
  NIID_SCENARIO_AR_DEPENDENT = 3,
  NIID_SCENARIO_SORTED_CLASSES = 4,
  NIID_SCENARIO_CLASS_DRIFT = 5,
  NIID_SCENARIO_CONTIGUOUS_BLOCK = 6
} niid_scenario_kind;

typedef struct niid_matrix niid_matrix;
typedef struct niid_graph niid_graph;
typedef struct niid_report niid_report;

NIID_API const char* niid_version(void);
NIID_API const char* niid_last_error(void);
NIID_API const char* niid_status_name(niid_status status);
NIID_API void niid_string_free(char* str);

/* ---- name lookups ---------------------------------------------------- */

NIID_API niid_status niid_parse_metric(const char* name, niid_metric* out);
NIID_API niid_status niid_parse_format(const char* name, niid_format* out);
NIID_API niid_status niid_parse_method(const char* name, niid_method* out);
NIID_API niid_status niid_parse_scenario_kind(const char* name, niid_scenario_kind* out);
NIID_API const char* niid_scenario_kind_name(niid_scenario_kind kind);

/* ---- feature matrices ------------------------------------------------ */

/* Copies rows*cols row-major values. Needs rows >= 2, cols >= 1, finite values. */
NIID_API niid_status niid_matrix_create(size_t rows, size_t cols, const double* values,
                                        niid_matrix** out);
NIID_API niid_status niid_matrix_load(const char* path, niid_format format, niid_matrix** out);
/* Atomic: writes a temporary sibling file, then renames it. */
NIID_API niid_status niid_matrix_save(const niid_matrix* matrix, const char* path,
                                      niid_format format);
NIID_API size_t niid_matrix_rows(const niid_matrix* matrix);
NIID_API size_t niid_matrix_cols(const niid_matrix* matrix);
/* Copies all values row-major; capacity is counted in doubles. */
NIID_API niid_status niid_matrix_copy_values(const niid_matrix* matrix, double* out,
                                             size_t capacity);
/* Rows reordered by a uniformly random permutation drawn from seed. */
NIID_API niid_status niid_matrix_shuffle(const niid_matrix* matrix, uint64_t seed,
                                         niid_matrix** out);
NIID_API void niid_matrix_free(niid_matrix* matrix);

/* ---- synthetic scenarios --------------------------------------------- */

typedef struct niid_scenario_spec {
  niid_scenario_kind kind;
  size_t n;
  size_t dims;
  uint64_t seed;
  size_t components;           /* Gaussian mixture components */
  double total_shift;          /* mean_shift: drift per dimension by the end */
  double variance_factor;      /* variance_changepoint: std multiplier */
  double changepoint_fraction; /* variance_changepoint: position of the change */
  double ar_coefficients[3];   /* ar_dependent: must sum to zero */
  size_t classes;              /* embedding scenarios */
  double class_separation;
  double drift_decay;
  size_t block_len;
  size_t block_class;
} niid_scenario_spec;

NIID_API niid_status niid_scenario_init(niid_scenario_kind kind, niid_scenario_spec* spec);
NIID_API niid_status niid_generate(const niid_scenario_spec* spec, niid_matrix** out);

/* ---- kNN graph ------------------------------------------------------- */

/* threads == 0 uses every hardware thread; the graph does not depend on it. */
NIID_API niid_status niid_graph_build(const niid_matrix* matrix, size_t k, niid_metric metric,
                                      unsigned threads, niid_graph** out);
NIID_API size_t niid_graph_size(const niid_graph* graph);
NIID_API size_t niid_graph_k(const niid_graph* graph);
/* Writes the k neighbors of node i, nearest first. */
NIID_API niid_status niid_graph_neighbors(const niid_graph* graph, size_t i, size_t* out,
                                          size_t capacity);
NIID_API void niid_graph_free(niid_graph* graph);

/* ---- audit ----------------------------------------------------------- */

typedef struct niid_audit_options {
  niid_method method;
  size_t k;            /* default 10 */
  niid_metric metric;  /* default euclidean */
  size_t permutations; /* default 25 */
  uint64_t seed;       /* default 0 */
  int compute_scores;  /* nonzero: per-datapoint scores (knn only) */
  size_t score_window; /* odd; 0 selects max(3, round(n / 50)) made odd */
  size_t max_lag;      /* autocorr, default 10 */
  size_t pca_chunks;   /* pca, default 10 */
  size_t pca_components; /* pca, default 1 */
  unsigned threads;    /* 0 = hardware concurrency */
} niid_audit_options;

NIID_API void niid_audit_options_init(niid_audit_options* options);
NIID_API niid_status niid_audit(const niid_matrix* matrix, const niid_audit_options* options,
                                niid_report** out);

NIID_API double niid_report_statistic(const niid_report* report);
NIID_API double niid_report_p_value(const niid_report* report);
/* 0 when scores were not requested. */
NIID_API size_t niid_report_score_count(const niid_report* report);
/* Either output pointer may be NULL. capacity is per array. */
NIID_API niid_status niid_report_scores(const niid_report* report, double* scores,
                                        double* smoothed, size_t capacity);
NIID_API niid_status niid_report_to_json(const niid_report* report, char** out);
/* "index,score,smoothed" CSV; fails when scores were not requested. */
NIID_API niid_status niid_report_scores_csv(const niid_report* report, char** out);
NIID_API void niid_report_free(niid_report* report);

/* ---- benchmark harness ----------------------------------------------- */

/* JSON plan for the default Gaussian grid (3 scenarios x 3 methods). */
NIID_API niid_status niid_bench_default_plan(char** plan_json);
/* Runs a JSON plan; threads overrides parallelism (0 = auto). */
NIID_API niid_status niid_bench_run(const char* plan_json, unsigned threads, char** result_json);

/* ---- files ----------------------------------------------------------- */

NIID_API niid_status niid_write_text_file(const char* path, const char* contents);

#ifdef __cplusplus
}
#endif

#endif /* NIID_NIID_H_ */
