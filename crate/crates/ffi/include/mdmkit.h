#ifndef MDMKIT_H
#define MDMKIT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MdmStatus {
  MDM_STATUS_OK = 0,
  MDM_STATUS_NULL_POINTER = 1,
  MDM_STATUS_INVALID_ARGUMENT = 2,
  // The computation rejected its input or failed.
  MDM_STATUS_COMPUTATION_FAILED = 3,
  // The caller's buffer is too small; the required size was written.
  MDM_STATUS_BUFFER_TOO_SMALL = 4,
  // An `mdm_run_json` call completed and reported violations.
  MDM_STATUS_VIOLATIONS = 5,
  MDM_STATUS_PANIC = 6,
} MdmStatus;

// A network of straight segments in the plane or in space.
typedef struct MdmNetwork MdmNetwork;

// One or more tied optimal trees.
typedef struct MdmTreeSet MdmTreeSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `cap` bytes). Returns the full message length without the
// terminator, or 0 when there is no error.
//
// # Safety
// `buf` must be writable for `cap` bytes or null when `cap` is 0.
size_t mdm_last_error_message(char *buf, size_t cap);

// Library version as a static NUL-terminated string.
const char *mdm_version(void);

// Builds a network from `n_nodes` packed points of dimension `dim` and
// `n_edges` index pairs.
//
// # Safety
// `coords` must hold `n_nodes * dim` doubles, `edges` `2 * n_edges` indices,
// and `out` must be writable.
enum MdmStatus mdm_network_new(const double *coords,
                               size_t n_nodes,
                               size_t dim,
                               const size_t *edges,
                               size_t n_edges,
                               struct MdmNetwork **out);

// # Safety
// `net` must come from this library and not be used afterwards.
void mdm_network_free(struct MdmNetwork *net);

// # Safety
// `net` must be a live handle and `out` writable.
enum MdmStatus mdm_network_length(const struct MdmNetwork *net, double *out);

// Node count, edge count and dimension of `net`.
//
// # Safety
// `net` must be a live handle; the out pointers writable.
enum MdmStatus mdm_network_shape(const struct MdmNetwork *net,
                                 size_t *n_nodes,
                                 size_t *n_edges,
                                 size_t *dim);

// Packed node coordinates, `dim` doubles per node.
//
// # Safety
// `buf` must be writable for `cap` doubles and `len` writable.
enum MdmStatus mdm_network_nodes(const struct MdmNetwork *net,
                                 double *buf,
                                 size_t cap,
                                 size_t *len);

// Packed edge index pairs.
//
// # Safety
// `buf` must be writable for `cap` indices and `len` writable.
enum MdmStatus mdm_network_edges(const struct MdmNetwork *net,
                                 size_t *buf,
                                 size_t cap,
                                 size_t *len);

// Largest distance from the `n` points to `net`.
//
// # Safety
// `points` must hold `n * dim` doubles where `dim` is the network's.
enum MdmStatus mdm_coverage_radius(const struct MdmNetwork *net,
                                   const double *points,
                                   size_t n,
                                   double *out);

// Euclidean Steiner trees of `n` points; all tied optima are returned.
//
// # Safety
// `points` must hold `n * dim` doubles and `out` be writable.
enum MdmStatus mdm_steiner_tree(const double *points,
                                size_t n,
                                size_t dim,
                                struct MdmTreeSet **out);

// Shortest connected sets whose `r`-neighborhood covers the `n` points.
//
// # Safety
// `points` must hold `n * dim` doubles and `out` be writable.
enum MdmStatus mdm_solve_finite(const double *points,
                                size_t n,
                                size_t dim,
                                double r,
                                struct MdmTreeSet **out);

// # Safety
// `set` must come from this library and not be used afterwards.
void mdm_tree_set_free(struct MdmTreeSet *set);

// # Safety
// `set` must be a live handle and `out` writable.
enum MdmStatus mdm_tree_set_count(const struct MdmTreeSet *set, size_t *out);

// Length of the optimal trees (they are tied).
//
// # Safety
// `set` must be a live handle and `out` writable.
enum MdmStatus mdm_tree_set_length(const struct MdmTreeSet *set, double *out);

// Copies tree `index` out as a new network handle.
//
// # Safety
// `set` must be a live handle and `out` writable.
enum MdmStatus mdm_tree_set_network(const struct MdmTreeSet *set,
                                    size_t index,
                                    struct MdmNetwork **out);

// Steiner tree of `n` points with every terminal edge shortened by `r`.
//
// # Safety
// `points` must hold `n * dim` doubles and `out` be writable.
enum MdmStatus mdm_truncate_full_steiner(const double *points,
                                         size_t n,
                                         size_t dim,
                                         double r,
                                         struct MdmNetwork **out);

// Length lower bound from the measure of the covered set in `R^d`.
//
// # Safety
// `out` must be writable.
enum MdmStatus mdm_lower_bound_volume(double measure, double r, size_t d, double *out);

// Length lower bound from the perimeter of a convex polygon of `n`
// vertices (packed `x, y`).
//
// # Safety
// `polygon` must hold `2 * n` doubles and `out` be writable.
enum MdmStatus mdm_lower_bound_perimeter(const double *polygon, size_t n, double r, double *out);

// Monte Carlo volume of the closed `r`-neighborhood of `net`, with a 3σ
// half-width.
//
// # Safety
// `net` must be a live handle; the out pointers writable.
enum MdmStatus mdm_tube_volume_mc(const struct MdmNetwork *net,
                                  double r,
                                  size_t samples,
                                  uint64_t seed,
                                  double *estimate,
                                  double *ci_halfwidth);

// Exact area of the `r`-neighborhood of a planar network.
//
// # Safety
// `net` must be a live handle and `out` writable.
enum MdmStatus mdm_tube_area_2d(const struct MdmNetwork *net, double r, double *out);

// Exact boundary length of the `r`-neighborhood of a planar network.
//
// # Safety
// `net` must be a live handle and `out` writable.
enum MdmStatus mdm_boundary_length_2d(const struct MdmNetwork *net, double r, double *out);

// Runs a command-line subcommand on JSON text and returns the result
// document in `*out`, to be released with [`mdm_string_free`]. Returns
// [`MdmStatus::Violations`] (with the document set) when the run found
// violations.
//
// # Safety
// `subcommand` and `input_json` must be NUL-terminated strings and `out`
// writable.
enum MdmStatus mdm_run_json(const char *subcommand,
                            const char *input_json,
                            uint64_t seed,
                            size_t samples,
                            char **out);

// # Safety
// `s` must come from [`mdm_run_json`] and not be used afterwards.
void mdm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MDMKIT_H */
