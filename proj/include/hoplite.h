/* hoplite: self-supervised graph embeddings via hop-category prediction.
 *
 * C interface to the shared library. All functions return HOPLITE_OK on
 * success; on failure they return a status code and leave a human-readable
 * message in hoplite_last_error() (thread-local). Strings returned through
 * char** out-parameters are heap-allocated; release them with hoplite_free().
 * Handles are opaque and must be released with their _close function.
 */
#ifndef HOPLITE_H
#define HOPLITE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hoplite_status {
  HOPLITE_OK = 0,
  HOPLITE_ERR_RUNTIME = 1, /* numeric failure, divergence, sampling dead end */
  HOPLITE_ERR_INPUT = 2    /* unreadable/malformed files, bad config, shape mismatch */
} hoplite_status;

typedef struct hoplite_dataset hoplite_dataset; /* graph + features (+ labels, splits) */
typedef struct hoplite_context hoplite_context; /* per-node hop buckets */
typedef struct hoplite_model hoplite_model;     /* trained parameters + embeddings */

const char* hoplite_version(void);
/* Message from the most recent failing call on this thread ("" if none). */
const char* hoplite_last_error(void);
void hoplite_free(char* s);

/* ---- dataset ---------------------------------------------------------- */

/* labels_path and the three split paths may be NULL or "" when absent. */
hoplite_status hoplite_dataset_open(const char* edges_path, const char* features_path,
                                    const char* labels_path, const char* train_split_path,
                                    const char* val_split_path, const char* test_split_path,
                                    hoplite_dataset** out);
void hoplite_dataset_close(hoplite_dataset* d);
uint32_t hoplite_dataset_num_nodes(const hoplite_dataset* d);
uint64_t hoplite_dataset_num_edges(const hoplite_dataset* d);
uint32_t hoplite_dataset_feature_dim(const hoplite_dataset* d);
/* Number of label classes; 0 when the dataset was opened without labels. */
uint32_t hoplite_dataset_num_classes(const hoplite_dataset* d);

/* ---- hop-context index ------------------------------------------------ */

/* boundaries: strictly increasing merge-policy boundaries (e.g. {1,2,4}).
 * num_threads <= 0 picks the OpenMP default. */
hoplite_status hoplite_context_build(const hoplite_dataset* d, const uint32_t* boundaries,
                                     uint32_t num_boundaries, int num_threads,
                                     hoplite_context** out);
/* Binary "S2CX" cache, bit-identical for identical inputs. */
hoplite_status hoplite_context_save(const hoplite_context* c, const char* path);
hoplite_status hoplite_context_load(const hoplite_dataset* d, const char* path,
                                    hoplite_context** out);
void hoplite_context_close(hoplite_context* c);
uint32_t hoplite_context_cap(const hoplite_context* c);
/* totals[k] = number of (node, neighbor-at-hop-k-plus-1) entries; len must
 * equal hoplite_context_cap(). */
hoplite_status hoplite_context_bucket_totals(const hoplite_context* c, uint64_t* totals,
                                             size_t len);

/* ---- training --------------------------------------------------------- */

/* Called after every epoch with (1-based epoch number, mean loss, elapsed
 * seconds). */
typedef void (*hoplite_progress_fn)(uint32_t epoch, double mean_loss, double seconds, void* user);

/* config_json keys (all optional unless noted):
 *   policy            array of boundaries, default [1,2,4]
 *   embedding_dim     default 512
 *   num_layers        1 or 2, default 1
 *   epochs            default 100
 *   lr                default 0.001
 *   targets_per_batch default 256
 *   pairs_per_category_per_target  default 4
 *   far_includes_unreachable       default false
 *   batches_per_epoch default 0 (= ceil(n / targets_per_batch))
 *   seed              default 0
 *   deterministic     default true
 *   divergence_threshold           default 1e6
 *   checkpoint_path   written when set
 *   embeddings_path   written when set
 * Unknown keys are rejected. report_json receives the run report; both
 * out-parameters may be NULL when the caller does not need them. */
hoplite_status hoplite_train(const hoplite_dataset* d, const hoplite_context* c,
                             const char* config_json, hoplite_progress_fn progress, void* user,
                             char** report_json, hoplite_model** out_model);

hoplite_status hoplite_model_save(const hoplite_model* m, const char* path);
hoplite_status hoplite_model_load(const char* path, hoplite_model** out);
void hoplite_model_close(hoplite_model* m);
uint32_t hoplite_model_embedding_dim(const hoplite_model* m);
/* Text export: "# n q" header then one "id v1 ... vq" row per node, ids in
 * the dataset's original label space. */
hoplite_status hoplite_model_export_embeddings(const hoplite_model* m, const hoplite_dataset* d,
                                               const char* path);

/* ---- evaluation ------------------------------------------------------- */

/* task: "classify" | "cluster" | "linkpred".
 *
 * classify config: runs (50), l2 (1e-4), step (0.1), max_iters (2000),
 *   tol (1e-7), row_normalize (true), seed (0); when the dataset has no
 *   split files: train_per_class (20), val_count (500), test_count (1000).
 * cluster config: k (default: label class count), runs (10), restarts (10),
 *   max_iters (300), row_normalize (true), seed (0).
 * linkpred config: ratio (0.2), runs (10), seed (0),
 *   scorer ("hop_classifier" | "inner_product"), train { trainer config as
 *   in hoplite_train, checkpoint/embedding paths ignored }.
 *
 * classify and cluster read embeddings from `m`; linkpred retrains per run
 * and ignores `m` (pass NULL). metrics_json receives
 * {"task", "mean", "std", "micro_f1", "runs", ...}. */
hoplite_status hoplite_eval(const hoplite_dataset* d, const hoplite_model* m, const char* task,
                            const char* config_json, char** metrics_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HOPLITE_H */
