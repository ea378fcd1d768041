#ifndef LOGNULL_H
#define LOGNULL_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LognullModel {
  LOGNULL_MODEL_SIMPLE_MODULARITY = 0,
  LOGNULL_MODEL_MODULARITY = 1,
  LOGNULL_MODEL_PPM = 2,
  LOGNULL_MODEL_DCPPM = 3,
  LOGNULL_MODEL_ILFR = 4,
  LOGNULL_MODEL_ILFRS = 5,
} LognullModel;

typedef enum LognullStatus {
  LOGNULL_STATUS_OK = 0,
  LOGNULL_STATUS_NULL_POINTER = 1,
  LOGNULL_STATUS_INVALID_UTF8 = 2,
  LOGNULL_STATUS_PARSE = 3,
  LOGNULL_STATUS_VALIDATION = 4,
  LOGNULL_STATUS_DOMAIN = 5,
  LOGNULL_STATUS_DEGENERATE_PARTITION = 6,
  LOGNULL_STATUS_UNDEFINED_GAMMA = 7,
  LOGNULL_STATUS_CONFIG = 8,
  LOGNULL_STATUS_NO_VALID_PARTITION = 9,
  LOGNULL_STATUS_IO = 10,
  LOGNULL_STATUS_BUFFER_TOO_SMALL = 11,
  LOGNULL_STATUS_PANIC = 12,
} LognullStatus;

typedef enum LognullStrategy {
  LOGNULL_STRATEGY_ITERATIVE = 0,
  LOGNULL_STRATEGY_MAX = 1,
  LOGNULL_STRATEGY_FIXED = 2,
} LognullStrategy;

/**
 * A graph together with its vertex labels.
 */
typedef struct LognullGraph LognullGraph;

typedef struct LognullPartition LognullPartition;

/**
 * Fitted parameters. Values a model does not use are NaN.
 */
typedef struct LognullParams {
  double p_in;
  double p_out;
  double mu;
  double gamma;
} LognullParams;

typedef struct LognullDetectSummary {
  struct LognullParams params;
  /**
   * NaN for the modularities.
   */
  double loglik;
  /**
   * Modularity at resolution 1.
   */
  double modularity;
  double search_param;
  size_t communities;
  size_t evaluations;
} LognullDetectSummary;

typedef struct LognullSimilarity {
  double nmi;
  double rand;
  double jaccard;
} LognullSimilarity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *lognull_last_error(void);

/**
 * Library version as a static string.
 */
const char *lognull_version(void);

/**
 * Parses an edge list (`u v` per line, `#` comments).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum LognullStatus lognull_graph_from_edge_list(const char *text, struct LognullGraph **out);

/**
 * Loads a bundled dataset: `karate`, `dolphins` or `football`. When
 * `truth` is not null it receives the ground-truth partition.
 *
 * # Safety
 * `name` must be a valid NUL-terminated string; `out` must be valid and
 * `truth` valid or null.
 */
enum LognullStatus lognull_graph_from_dataset(const char *name,
                                              struct LognullGraph **out,
                                              struct LognullPartition **truth);

/**
 * # Safety
 * `graph` must come from this library and not be used afterwards.
 */
void lognull_graph_free(struct LognullGraph *graph);

/**
 * # Safety
 * `graph` must be a valid handle or null (returns 0).
 */
size_t lognull_graph_vertex_count(const struct LognullGraph *graph);

/**
 * Total edge weight. NaN for a null handle.
 *
 * # Safety
 * `graph` must be a valid handle or null.
 */
double lognull_graph_total_weight(const struct LognullGraph *graph);

/**
 * Parses `vertex community` lines against the graph's vertex labels.
 *
 * # Safety
 * `graph` must be a valid handle, `text` a NUL-terminated string and `out`
 * a valid pointer.
 */
enum LognullStatus lognull_partition_from_text(const struct LognullGraph *graph,
                                               const char *text,
                                               struct LognullPartition **out);

/**
 * Builds a partition from community labels indexed by vertex id.
 *
 * # Safety
 * `labels` must point to `len` values (or be null with `len` 0) and `out`
 * must be valid.
 */
enum LognullStatus lognull_partition_from_labels(const size_t *labels,
                                                 size_t len,
                                                 struct LognullPartition **out);

/**
 * # Safety
 * `partition` must come from this library and not be used afterwards.
 */
void lognull_partition_free(struct LognullPartition *partition);

/**
 * # Safety
 * `partition` must be a valid handle or null (returns 0).
 */
size_t lognull_partition_len(const struct LognullPartition *partition);

/**
 * # Safety
 * `partition` must be a valid handle or null (returns 0).
 */
size_t lognull_partition_num_communities(const struct LognullPartition *partition);

/**
 * Copies community ids (dense, first-appearance order) into `buffer`,
 * which must hold at least `lognull_partition_len` values.
 *
 * # Safety
 * `partition` must be valid and `buffer` must point to `capacity` writable
 * values.
 */
enum LognullStatus lognull_partition_assignment(const struct LognullPartition *partition,
                                                size_t *buffer,
                                                size_t capacity);

/**
 * Fits `model` to the partition and returns the quality at the fitted
 * parameters. The modularities are evaluated at resolution 1.
 *
 * # Safety
 * Handles must be valid; `value` must be valid and `fitted` valid or null.
 */
enum LognullStatus lognull_loglik(const struct LognullGraph *graph,
                                  const struct LognullPartition *partition,
                                  enum LognullModel model,
                                  double *value,
                                  struct LognullParams *fitted);

/**
 * Runs a detection. `param` is the resolution or mixing value for the
 * fixed strategy and is ignored otherwise.
 *
 * # Safety
 * `graph` must be valid, `out` valid, and `summary` valid or null.
 */
enum LognullStatus lognull_detect(const struct LognullGraph *graph,
                                  enum LognullModel model,
                                  enum LognullStrategy strategy,
                                  double param,
                                  uint64_t seed,
                                  struct LognullPartition **out,
                                  struct LognullDetectSummary *summary);

/**
 * NMI, Rand and Jaccard indices of two partitions of the same vertices.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum LognullStatus lognull_similarity(const struct LognullPartition *first,
                                      const struct LognullPartition *second,
                                      struct LognullSimilarity *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOGNULL_H */
