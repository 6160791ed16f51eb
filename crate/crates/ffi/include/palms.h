#ifndef PALMS_H
#define PALMS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PalmsStatus {
  PALMS_STATUS_OK = 0,
  /**
   * A required pointer was null, or a string was not UTF-8.
   */
  PALMS_STATUS_INVALID_ARGUMENT = 1,
  /**
   * A configuration value is out of range.
   */
  PALMS_STATUS_CONFIG = 2,
  /**
   * Input data could not be read or is malformed.
   */
  PALMS_STATUS_DATA = 3,
  /**
   * A regression failed.
   */
  PALMS_STATUS_SOLVER = 4,
  /**
   * An unexpected internal failure.
   */
  PALMS_STATUS_INTERNAL = 5,
} PalmsStatus;

typedef enum PalmsModel {
  PALMS_MODEL_GAUSSIAN = 0,
  PALMS_MODEL_ULTIMATUM = 1,
  PALMS_MODEL_KURAMOTO = 2,
} PalmsModel;

typedef struct PalmsConfig PalmsConfig;

typedef struct PalmsDataset PalmsDataset;

typedef struct PalmsNetwork PalmsNetwork;

typedef struct PalmsReport PalmsReport;

/**
 * Reconstruction quality. A rate is NaN when its `_defined` flag is 0.
 */
typedef struct PalmsMetrics {
  double mse;
  double srnl;
  double srel;
  int srnl_defined;
  int srel_defined;
} PalmsMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *palms_last_error(void);

/**
 * Erdős–Rényi network on `n` nodes with edge probability `p`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum PalmsStatus palms_network_random(size_t n, double p, uint64_t seed, struct PalmsNetwork **out);

/**
 * Read a whitespace-separated edge list; ids are renumbered densely in
 * increasing order.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` as in [`palms_network_random`].
 */
enum PalmsStatus palms_network_load(const char *path, int directed, struct PalmsNetwork **out);

/**
 * # Safety
 * `net` must be null or a handle not yet freed.
 */
void palms_network_free(struct PalmsNetwork *net);

/**
 * Node count, or 0 for a null handle.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t palms_network_nodes(const struct PalmsNetwork *net);

/**
 * Edge count (unordered pairs for undirected networks), or 0 for null.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t palms_network_edges(const struct PalmsNetwork *net);

/**
 * 1 if `i → j` is an edge, 0 otherwise or when out of range.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
int palms_network_has_edge(const struct PalmsNetwork *net, size_t i, size_t j);

/**
 * Simulate `rounds` of dynamics on `net` with Gaussian noise of `noise_std`.
 * Kuramoto uses the library's default step and coupling.
 *
 * # Safety
 * `net` must be a live handle; `out` as in [`palms_network_random`].
 */
enum PalmsStatus palms_dataset_simulate(const struct PalmsNetwork *net,
                                        enum PalmsModel model,
                                        size_t rounds,
                                        double noise_std,
                                        uint64_t seed,
                                        struct PalmsDataset **out);

/**
 * # Safety
 * `dir` must be a NUL-terminated string; `out` as in [`palms_network_random`].
 */
enum PalmsStatus palms_dataset_load(const char *dir, struct PalmsDataset **out);

/**
 * # Safety
 * `data` must be a live handle and `dir` a NUL-terminated string.
 */
enum PalmsStatus palms_dataset_save(const struct PalmsDataset *data, const char *dir);

/**
 * # Safety
 * `data` must be null or a handle not yet freed.
 */
void palms_dataset_free(struct PalmsDataset *data);

/**
 * # Safety
 * `data` must be null or a live handle.
 */
size_t palms_dataset_nodes(const struct PalmsDataset *data);

/**
 * # Safety
 * `data` must be null or a live handle.
 */
size_t palms_dataset_rounds(const struct PalmsDataset *data);

/**
 * A configuration holding the command-line defaults.
 *
 * # Safety
 * `out` as in [`palms_network_random`].
 */
enum PalmsStatus palms_config_new(struct PalmsConfig **out);

/**
 * Set one key as in a configuration file, e.g. `("method", "p_lasso")`,
 * `("k", "4")`, `("lambda", "cv")`.
 *
 * # Safety
 * `cfg` must be a live handle; `key` and `value` NUL-terminated strings.
 */
enum PalmsStatus palms_config_set(struct PalmsConfig *cfg, const char *key, const char *value);

/**
 * # Safety
 * `cfg` must be null or a handle not yet freed.
 */
void palms_config_free(struct PalmsConfig *cfg);

/**
 * Reconstruct the network behind `data` with the method and settings of `cfg`.
 *
 * # Safety
 * `data` and `cfg` must be live handles; `out` as in [`palms_network_random`].
 */
enum PalmsStatus palms_reconstruct(const struct PalmsDataset *data,
                                   const struct PalmsConfig *cfg,
                                   struct PalmsReport **out);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void palms_report_free(struct PalmsReport *report);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
size_t palms_report_nodes(const struct PalmsReport *report);

/**
 * Wall time of the reconstruction in seconds.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double palms_report_wall_time(const struct PalmsReport *report);

/**
 * Copy the row-major `N×N` continuous scores into `buf` of length `len`.
 *
 * # Safety
 * `report` must be a live handle and `buf` valid for `len` writes.
 */
enum PalmsStatus palms_report_scores(const struct PalmsReport *report, double *buf, size_t len);

/**
 * 1 if the binarised estimate contains `i → j`.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
int palms_report_has_edge(const struct PalmsReport *report, size_t i, size_t j);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
size_t palms_report_edges(const struct PalmsReport *report);

/**
 * Score a reconstruction against the true network.
 *
 * # Safety
 * `truth` and `report` must be live handles and `out` writable.
 */
enum PalmsStatus palms_evaluate(const struct PalmsNetwork *truth,
                                const struct PalmsReport *report,
                                struct PalmsMetrics *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PALMS_H */
