#ifndef COMENET_H
#define COMENET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ComenetStatus {
  COMENET_STATUS_OK = 0,
  COMENET_STATUS_NULL_POINTER = 1,
  COMENET_STATUS_INVALID_ARGUMENT = 2,
  COMENET_STATUS_PARSE_ERROR = 3,
  COMENET_STATUS_IO_ERROR = 4,
  /*
   Degenerate or inconsistent geometry.
   */
  COMENET_STATUS_GEOMETRY_ERROR = 5,
  /*
   Topologies or shapes that do not match.
   */
  COMENET_STATUS_TOPOLOGY_ERROR = 6,
  /*
   Output buffer too small; the message names the required length.
   */
  COMENET_STATUS_BUFFER_TOO_SMALL = 7,
  COMENET_STATUS_PANIC = 8,
} ComenetStatus;

/*
 Opaque basis handle.
 */
typedef struct ComenetBasis ComenetBasis;

/*
 Opaque graph handle.
 */
typedef struct ComenetGraph ComenetGraph;

/*
 Opaque tuple set handle.
 */
typedef struct ComenetTupleSet ComenetTupleSet;

/*
 One directed-edge tuple. Reference indices are −1 when absent.
 */
typedef struct ComenetEdgeTuple {
  size_t i;
  size_t j;
  double d;
  double theta;
  double phi;
  double tau;
  /*
   Bit 0: φ degenerate, bit 1: τ degenerate.
   */
  uint8_t flags;
  int64_t first;
  int64_t second;
  int64_t source_excluding;
  int64_t target_excluding;
} ComenetEdgeTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. Valid until the
 next failing call on the same thread.
 */
const char *comenet_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *comenet_version(void);

/*
 Builds a radius graph from `n` atomic numbers and `3n` coordinates.

 # Safety
 `species` must point to `n` values and `positions` to `3n` values.
 */
enum ComenetStatus comenet_graph_from_arrays(const uint32_t *species,
                                             const double *positions,
                                             size_t n,
                                             double cutoff,
                                             struct ComenetGraph **out);

/*
 Builds a radius graph from the first frame of XYZ text.

 # Safety
 `text` must be a valid NUL-terminated string.
 */
enum ComenetStatus comenet_graph_from_xyz(const char *text,
                                          double cutoff,
                                          struct ComenetGraph **out);

/*
 # Safety
 `graph` must come from this library and not be used afterwards.
 */
void comenet_graph_free(struct ComenetGraph *graph);

/*
 # Safety
 `graph` must be a live handle.
 */
enum ComenetStatus comenet_graph_num_nodes(const struct ComenetGraph *graph, size_t *out);

/*
 Number of directed edges.

 # Safety
 `graph` must be a live handle.
 */
enum ComenetStatus comenet_graph_num_edges(const struct ComenetGraph *graph, size_t *out);

/*
 Copies the `3n` coordinates into `buffer`.

 # Safety
 `graph` must be a live handle and `buffer` must hold `len` values.
 */
enum ComenetStatus comenet_graph_positions(const struct ComenetGraph *graph,
                                           double *buffer,
                                           size_t len);

/*
 Applies `p ↦ R p + t` with `rotation` row-major 3×3 and `translation` of
 length 3, producing a new graph.

 # Safety
 Pointers must be valid for the stated lengths.
 */
enum ComenetStatus comenet_graph_apply_se3(const struct ComenetGraph *graph,
                                           const double *rotation,
                                           const double *translation,
                                           struct ComenetGraph **out);

/*
 Computes the tuple of every directed edge.

 # Safety
 `graph` must be a live handle.
 */
enum ComenetStatus comenet_transform(const struct ComenetGraph *graph,
                                     struct ComenetTupleSet **out);

/*
 # Safety
 `tuples` must come from this library and not be used afterwards.
 */
void comenet_tuples_free(struct ComenetTupleSet *tuples);

/*
 # Safety
 `tuples` must be a live handle.
 */
enum ComenetStatus comenet_tuples_len(const struct ComenetTupleSet *tuples, size_t *out);

/*
 Tuple number `k` in `(i, j)` order.

 # Safety
 `tuples` must be a live handle.
 */
enum ComenetStatus comenet_tuples_get(const struct ComenetTupleSet *tuples,
                                      size_t k,
                                      struct ComenetEdgeTuple *out);

/*
 Rebuilds coordinates from `tuples` using the topology of `graph`, aligns
 them onto `graph` and writes the aligned `3n` coordinates and the RMSD.

 # Safety
 Handles must be live; `positions` must hold `len` values.
 */
enum ComenetStatus comenet_reconstruct(const struct ComenetGraph *graph,
                                       const struct ComenetTupleSet *tuples,
                                       double *positions,
                                       size_t len,
                                       double *rmsd);

/*
 # Safety
 `out` must be writable.
 */
enum ComenetStatus comenet_basis_new(double cutoff,
                                     size_t num_radial,
                                     size_t num_spherical,
                                     struct ComenetBasis **out);

/*
 # Safety
 `basis` must come from this library and not be used afterwards.
 */
void comenet_basis_free(struct ComenetBasis *basis);

/*
 TBF length `L²N`.

 # Safety
 `basis` must be a live handle.
 */
enum ComenetStatus comenet_basis_tbf_len(const struct ComenetBasis *basis, size_t *out);

/*
 SBF length `LN`.

 # Safety
 `basis` must be a live handle.
 */
enum ComenetStatus comenet_basis_sbf_len(const struct ComenetBasis *basis, size_t *out);

/*
 # Safety
 `basis` must be a live handle and `buffer` must hold `len` values.
 */
enum ComenetStatus comenet_basis_tbf(const struct ComenetBasis *basis,
                                     double d,
                                     double theta,
                                     double phi,
                                     double *buffer,
                                     size_t len);

/*
 # Safety
 `basis` must be a live handle and `buffer` must hold `len` values.
 */
enum ComenetStatus comenet_basis_sbf(const struct ComenetBasis *basis,
                                     double d,
                                     double tau,
                                     double *buffer,
                                     size_t len);

/*
 Scalar output of the fixed-weight network with default basis sizes.

 # Safety
 `graph` must be a live handle.
 */
enum ComenetStatus comenet_forward(const struct ComenetGraph *graph,
                                   size_t num_layers,
                                   size_t hidden,
                                   uint64_t seed,
                                   bool use_tau,
                                   double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMENET_H */
