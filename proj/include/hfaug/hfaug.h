/* hfaug -- account-interaction graph analytics and metapath feature
 * augmentation for Ponzi-style account classification.
 *
 * C API over the C++ core. All objects are opaque handles created and
 * destroyed through these functions; every fallible call returns an
 * hfa_status and leaves a human-readable message in hfa_last_error()
 * (thread-local) on failure. Out parameters are untouched on failure
 * unless stated otherwise.
 */
#ifndef HFAUG_H
#define HFAUG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hfa_status {
  HFA_OK = 0,
  HFA_ERROR_USAGE = 1,    /* invalid arguments or call sequence */
  HFA_ERROR_DATA = 2,     /* I/O failures, malformed or contradictory data */
  HFA_ERROR_INTERNAL = 3, /* unexpected internal failure */
} hfa_status;

typedef enum hfa_format {
  HFA_FORMAT_CSV = 0,
  HFA_FORMAT_JSONL = 1,
} hfa_format;

typedef enum hfa_kind {
  HFA_KIND_EOA = 0,
  HFA_KIND_CA = 1,
} hfa_kind;

typedef enum hfa_aug_mode {
  HFA_AUG_TARGET_CA = 0,
  HFA_AUG_HEAD_NODE = 1,
} hfa_aug_mode;

typedef enum hfa_agg {
  HFA_AGG_SUM = 0,
  HFA_AGG_MEAN = 1,
} hfa_agg;

typedef enum hfa_walk_strategy {
  HFA_WALK_UNIFORM = 0,  /* DeepWalk */
  HFA_WALK_NODE2VEC = 1,
} hfa_walk_strategy;

typedef enum hfa_model {
  HFA_MODEL_LOGISTIC = 0,
  HFA_MODEL_HINGE = 1, /* linear SVM */
} hfa_model;

typedef struct hfa_graph hfa_graph;     /* heterogeneous interaction graph */
typedef struct hfa_matrix hfa_matrix;   /* id-keyed dense feature matrix */
typedef struct hfa_pattern hfa_pattern; /* compiled metapath */
typedef struct hfa_matches hfa_matches; /* result of one match query */
typedef struct hfa_walks hfa_walks;     /* random-walk corpus */
typedef struct hfa_report hfa_report;   /* cross-validation report */
typedef struct hfa_strings hfa_strings; /* immutable list of account ids */

const char* hfa_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* hfa_last_error(void);

/* Frees a string returned through a char** out parameter. */
void hfa_string_free(char* s);

/* ---- id lists ---------------------------------------------------------- */

hfa_status hfa_strings_create(const char* const* items, size_t count, hfa_strings** out);
size_t hfa_strings_count(const hfa_strings* list);
const char* hfa_strings_get(const hfa_strings* list, size_t i);
void hfa_strings_free(hfa_strings* list);

/* ---- graph ------------------------------------------------------------- */

/* Parses the accounts/edges/labels files (labels_path may be NULL) and
 * builds the graph. lenient != 0 skips malformed rows, call-into-EOA edges
 * and bad labels instead of failing. */
hfa_status hfa_graph_load(const char* accounts_path, const char* edges_path,
                          const char* labels_path, hfa_format format, int lenient,
                          hfa_graph** out);
void hfa_graph_free(hfa_graph* g);

/* Any out pointer may be NULL. */
hfa_status hfa_graph_counts(const hfa_graph* g, uint64_t* nodes, uint64_t* edges, uint64_t* ca,
                            uint64_t* eoa, uint64_t* trans, uint64_t* call, uint64_t* labels);

/* Validates counts against a spec like "v=57130,trans=86602,labels=191"
 * (keys: v,e,ca,eoa,trans,call,labels; any subset). */
hfa_status hfa_graph_validate_counts(const hfa_graph* g, const char* expectations);

hfa_status hfa_graph_save(const hfa_graph* g, const char* accounts_path, const char* edges_path,
                          const char* labels_path);

/* kind filter: -1 = all accounts, else hfa_kind. */
hfa_status hfa_graph_accounts(const hfa_graph* g, int kind, hfa_strings** out);
hfa_status hfa_graph_ponzi_accounts(const hfa_graph* g, hfa_strings** out);
hfa_status hfa_graph_account_kind(const hfa_graph* g, const char* address, int* kind);

/* Uniform sample, without replacement, of ponzi-count CA accounts not
 * labeled ponzi. Deterministic per seed. */
hfa_status hfa_graph_sample_negatives(const hfa_graph* g, uint64_t seed, hfa_strings** out);

/* ---- feature matrices --------------------------------------------------- */

hfa_status hfa_matrix_load_csv(const char* path, hfa_matrix** out);
hfa_status hfa_matrix_save_csv(const hfa_matrix* m, const char* path);
hfa_status hfa_matrix_dims(const hfa_matrix* m, uint64_t* rows, uint64_t* cols);
hfa_status hfa_matrix_id(const hfa_matrix* m, uint64_t row, const char** out);
hfa_status hfa_matrix_row(const hfa_matrix* m, uint64_t row, const double** values,
                          uint64_t* count);
void hfa_matrix_free(hfa_matrix* m);

/* The 15 manual account statistics for the given ids (NULL = every
 * account, in graph order). */
hfa_status hfa_manual_features(const hfa_graph* g, const hfa_strings* ids, hfa_matrix** out);

/* ---- metapaths ---------------------------------------------------------- */

/* spec: "P1", "P2", or "KIND (-etype-> KIND)+", e.g.
 * "EOA -call-> CA -trans-> EOA -trans-> CA". */
hfa_status hfa_pattern_compile(const char* spec, hfa_pattern** out);
const char* hfa_pattern_name(const hfa_pattern* p);
size_t hfa_pattern_steps(const hfa_pattern* p);
/* Node kind at pattern position pos, 0 <= pos <= steps. */
hfa_status hfa_pattern_kind_at(const hfa_pattern* p, size_t pos, int* kind);
void hfa_pattern_free(hfa_pattern* p);

/* Instances whose node at anchor_pos is `address` (anchor_pos 0 = plain
 * head matching). max_instances 0 means the default limit of 1000. */
hfa_status hfa_match(const hfa_graph* g, const hfa_pattern* p, const char* address,
                     size_t anchor_pos, uint64_t max_instances, hfa_matches** out);
size_t hfa_matches_count(const hfa_matches* m);
int hfa_matches_truncated(const hfa_matches* m);
hfa_status hfa_matches_instance(const hfa_matches* m, size_t i, uint32_t* offset, int* complete,
                                size_t* length);
hfa_status hfa_matches_node(const hfa_matches* m, size_t i, size_t j, const char** out);
/* JSONL, one {"start","pattern","nodes","complete"} object per instance. */
hfa_status hfa_matches_to_jsonl(const hfa_matches* m, char** out);
void hfa_matches_free(hfa_matches* m);

/* ---- feature augmentation ----------------------------------------------- */

/* Aggregates features of nodes on matched instances into each target row.
 * patterns/pattern_count: at least one compiled pattern. targets NULL means
 * every matrix row whose kind suits the mode. diagnostics_json (optional)
 * receives per-target instance counts and truncation flags. */
hfa_status hfa_augment(const hfa_graph* g, const hfa_matrix* features, const hfa_strings* targets,
                       hfa_aug_mode mode, const hfa_pattern* const* patterns, size_t pattern_count,
                       int dedupe, hfa_agg agg, uint64_t max_instances, hfa_matrix** out,
                       char** diagnostics_json);

/* ---- random walks and embeddings ---------------------------------------- */

hfa_status hfa_generate_walks(const hfa_graph* g, uint32_t walks_per_node, uint32_t walk_length,
                              hfa_walk_strategy strategy, double p, double q, int undirected,
                              uint64_t seed, hfa_walks** out);
size_t hfa_walks_count(const hfa_walks* w);
hfa_status hfa_walks_save(const hfa_walks* w, const char* path);
void hfa_walks_free(hfa_walks* w);

/* Embedding rows for every account (zero vectors for nodes absent from the
 * corpus). final_loss (optional) receives the last epoch's mean loss. */
hfa_status hfa_train_embeddings(const hfa_walks* w, uint32_t dim, uint32_t window,
                                uint32_t negatives, uint32_t epochs, double learning_rate,
                                uint64_t seed, int l2_normalize, hfa_matrix** out,
                                double* final_loss);

/* ---- evaluation ---------------------------------------------------------- */

/* Repeated stratified k-fold cross-validation of a linear classifier on the
 * matrix rows, labels joined from a `address,label` CSV. standardize != 0
 * fits a per-fold z-score on training rows only. */
hfa_status hfa_evaluate(const hfa_matrix* features, const char* labels_path, hfa_model model,
                        uint32_t k, uint32_t repeats, uint64_t seed, int standardize,
                        hfa_report** out);
hfa_status hfa_report_mean(const hfa_report* r, double* mean, double* stddev);
hfa_status hfa_report_to_json(const hfa_report* r, char** out);
hfa_status hfa_report_load_json(const char* path, hfa_report** out);
hfa_status hfa_report_save_json(const hfa_report* r, const char* path);
void hfa_report_free(hfa_report* r);

/* Relative improvement in percent: 100 * (aug - raw) / raw. raw must be
 * positive. */
hfa_status hfa_gain(double raw_score, double aug_score, double* out);

/* ---- synthetic data and pipeline ----------------------------------------- */

hfa_status hfa_synth(uint32_t n_ponzi, uint32_t n_background, uint32_t investors_per_ponzi,
                     double payback_fraction, uint32_t noise_edges, uint64_t seed,
                     const char* accounts_path, const char* edges_path, const char* labels_path);

/* Runs the full pipeline from a JSON config file. out_dir/seed, when given
 * (non-NULL / non-zero seed_override flag), override the config. summary_json,
 * when non-NULL, receives a JSON document with counts, per-model scores and
 * artifact paths (free with hfa_string_free). */
hfa_status hfa_pipeline_run(const char* config_path, const char* out_dir, int has_seed_override,
                            uint64_t seed_override, char** summary_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HFAUG_H */
