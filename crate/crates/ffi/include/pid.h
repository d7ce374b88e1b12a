#ifndef PID_H
#define PID_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result codes.
 */
typedef enum PidStatus {
  PID_STATUS_OK = 0,
  PID_STATUS_NULL_POINTER = 1,
  PID_STATUS_CAPACITY = 2,
  PID_STATUS_USAGE = 3,
  PID_STATUS_PARSE = 4,
  PID_STATUS_DISTRIBUTION = 5,
  PID_STATUS_DOMAIN = 6,
  PID_STATUS_UNKNOWN_MEASURE = 7,
  PID_STATUS_INTERNAL = 8,
  PID_STATUS_INVALID_UTF8 = 9,
  PID_STATUS_INDEX_OUT_OF_RANGE = 10,
  PID_STATUS_PANIC = 11,
} PidStatus;

/**
 * Node label view.
 */
typedef enum PidView {
  PID_VIEW_ANTICHAIN = 0,
  PID_VIEW_BITSTRING = 1,
  PID_VIEW_STATEMENT = 2,
} PidView;

/**
 * Opaque decomposition handle.
 */
typedef struct PidDecomposition PidDecomposition;

/**
 * Opaque distribution handle.
 */
typedef struct PidDistribution PidDistribution;

/**
 * Opaque lattice handle.
 */
typedef struct PidLattice PidLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pid_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pid_string_free(char *s);

/**
 * Builds the lattice for `n` sources (1 to 5).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum PidStatus pid_lattice_new(uintptr_t n, struct PidLattice **out);

/**
 * # Safety
 * `lattice` must come from [`pid_lattice_new`] and not have been freed.
 */
void pid_lattice_free(struct PidLattice *lattice);

/**
 * Number of nodes, or 0 for a NULL handle.
 *
 * # Safety
 * `lattice` must be NULL or a live handle.
 */
uintptr_t pid_lattice_node_count(const struct PidLattice *lattice);

/**
 * Label of node `index` (canonical order) in the requested view.
 *
 * # Safety
 * `lattice` must be a live handle and `out` writable.
 */
enum PidStatus pid_lattice_node_label(const struct PidLattice *lattice,
                                      uintptr_t index,
                                      enum PidView view,
                                      char **out);

/**
 * Number of children (lower covers) of node `index`.
 *
 * # Safety
 * `lattice` must be a live handle and `out` writable.
 */
enum PidStatus pid_lattice_child_count(const struct PidLattice *lattice,
                                       uintptr_t index,
                                       uintptr_t *out);

/**
 * DOT (`as_json == 0`) or JSON rendering of the lattice.
 *
 * # Safety
 * `lattice` must be a live handle and `out` writable.
 */
enum PidStatus pid_lattice_export(const struct PidLattice *lattice,
                                  enum PidView view,
                                  int32_t as_json,
                                  char **out);

/**
 * Parses a distribution from CSV or JSON text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum PidStatus pid_distribution_load(const char *text, struct PidDistribution **out);

/**
 * # Safety
 * `dist` must come from [`pid_distribution_load`] and not have been freed.
 */
void pid_distribution_free(struct PidDistribution *dist);

/**
 * Number of sources, or 0 for a NULL handle.
 *
 * # Safety
 * `dist` must be NULL or a live handle.
 */
uintptr_t pid_distribution_source_count(const struct PidDistribution *dist);

/**
 * Runs a decomposition. `measure` is one of `sx`, `res`, `ws`, `ms`, `unq`.
 *
 * # Safety
 * `dist` must be a live handle, `measure` a NUL-terminated string and `out` writable.
 */
enum PidStatus pid_decompose(const struct PidDistribution *dist,
                             const char *measure,
                             struct PidDecomposition **out);

/**
 * # Safety
 * `dec` must come from [`pid_decompose`] and not have been freed.
 */
void pid_decomposition_free(struct PidDecomposition *dec);

/**
 * Number of atoms, or 0 for a NULL handle.
 *
 * # Safety
 * `dec` must be NULL or a live handle.
 */
uintptr_t pid_decomposition_node_count(const struct PidDecomposition *dec);

/**
 * Averaged atom at node `index`.
 *
 * # Safety
 * `dec` must be a live handle and `out` writable.
 */
enum PidStatus pid_decomposition_atom(const struct PidDecomposition *dec,
                                      uintptr_t index,
                                      double *out);

/**
 * Averaged measure value (redundancy for `sx`) at node `index`.
 *
 * # Safety
 * `dec` must be a live handle and `out` writable.
 */
enum PidStatus pid_decomposition_measure_value(const struct PidDecomposition *dec,
                                               uintptr_t index,
                                               double *out);

/**
 * Informative and misinformative atoms at node `index` (`sx` only).
 *
 * # Safety
 * `dec` must be a live handle; `plus` and `minus` writable.
 */
enum PidStatus pid_decomposition_split(const struct PidDecomposition *dec,
                                       uintptr_t index,
                                       double *plus,
                                       double *minus);

/**
 * Antichain label (`{1}{2}`) of node `index`.
 *
 * # Safety
 * `dec` must be a live handle and `out` writable.
 */
enum PidStatus pid_decomposition_node_label(const struct PidDecomposition *dec,
                                            uintptr_t index,
                                            char **out);

/**
 * Largest consistency residual `|I(T:a) − Σ_{f(a)=1} Π(f)|`.
 *
 * # Safety
 * `dec` must be a live handle and `out` writable.
 */
enum PidStatus pid_decomposition_max_residual(const struct PidDecomposition *dec, double *out);

/**
 * JSON document with averaged atoms, diagnostics and, if `pointwise != 0`,
 * the per-realization tables.
 *
 * # Safety
 * `dec` must be a live handle and `out` writable.
 */
enum PidStatus pid_decomposition_to_json(const struct PidDecomposition *dec,
                                         int32_t pointwise,
                                         char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PID_H */
