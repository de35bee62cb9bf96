#ifndef CTN_H
#define CTN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CtnStatus {
  CTN_STATUS_OK = 0,
  CTN_STATUS_NULL_POINTER = 1,
  CTN_STATUS_INVALID_ARGUMENT = 2,
  CTN_STATUS_UNSUPPORTED = 3,
  CTN_STATUS_PANIC = 4,
} CtnStatus;

/**
 * Opaque complete transposition graph.
 */
typedef struct CtnGraph CtnGraph;

/**
 * Opaque edge subset of a particular graph.
 */
typedef struct CtnMask CtnMask;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *ctn_last_error_message(void);

/**
 * Static, NUL-terminated version string.
 */
const char *ctn_version(void);

/**
 * Builds `CT_n` for `3 <= n <= 8`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum CtnStatus ctn_graph_new(uint32_t n, struct CtnGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from [`ctn_graph_new`] not yet freed.
 */
void ctn_graph_free(struct CtnGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle and `out` valid for writing.
 */
enum CtnStatus ctn_graph_vertex_count(const struct CtnGraph *g, uint64_t *out);

/**
 * # Safety
 * `g` must be a live graph handle and `out` valid for writing.
 */
enum CtnStatus ctn_graph_edge_count(const struct CtnGraph *g, uint64_t *out);

/**
 * Endpoint ranks (even, odd) of edge `edge`.
 *
 * # Safety
 * `g` must be a live graph handle; `even` and `odd` valid for writing.
 */
enum CtnStatus ctn_graph_edge_endpoints(const struct CtnGraph *g,
                                        uint64_t edge,
                                        uint64_t *even,
                                        uint64_t *odd);

/**
 * A new mask over `g`, empty or full.
 *
 * # Safety
 * `g` must be a live graph handle and `out` valid for writing.
 */
enum CtnStatus ctn_mask_new(const struct CtnGraph *g, bool full, struct CtnMask **out);

/**
 * # Safety
 * `m` must be null or a mask handle not yet freed.
 */
void ctn_mask_free(struct CtnMask *m);

/**
 * Adds (`present = true`) or removes edge `edge`.
 *
 * # Safety
 * `m` must be a live mask handle.
 */
enum CtnStatus ctn_mask_set(struct CtnMask *m, uint64_t edge, bool present);

/**
 * # Safety
 * `m` must be a live mask handle and `out` valid for writing.
 */
enum CtnStatus ctn_mask_contains(const struct CtnMask *m, uint64_t edge, bool *out);

/**
 * # Safety
 * `m` must be a live mask handle and `out` valid for writing.
 */
enum CtnStatus ctn_mask_count(const struct CtnMask *m, uint64_t *out);

/**
 * Shortest cycle length of the subgraph; 0 if it has no cycle.
 *
 * # Safety
 * `g`, `m` must be live handles and `out` valid for writing.
 */
enum CtnStatus ctn_girth(const struct CtnGraph *g, const struct CtnMask *m, uint32_t *out);

/**
 * Searches for a cycle of length `len` in the subgraph. On success
 * `*found_len` is 0 when there is none, otherwise `len`, with the vertex
 * ranks written to `vertices` (capacity `cap`, at least `len`).
 *
 * # Safety
 * `g`, `m` must be live handles; `vertices` valid for `cap` writes;
 * `found_len` valid for writing.
 */
enum CtnStatus ctn_find_cycle(const struct CtnGraph *g,
                              const struct CtnMask *m,
                              uint32_t len,
                              uint64_t *vertices,
                              size_t cap,
                              size_t *found_len);

/**
 * Number of cycles of length `len` in the subgraph.
 *
 * # Safety
 * `g`, `m` must be live handles and `out` valid for writing.
 */
enum CtnStatus ctn_count_cycles(const struct CtnGraph *g,
                                const struct CtnMask *m,
                                uint32_t len,
                                uint64_t *out);

/**
 * Seeded local search for a dense subgraph with no cycle of length `len`.
 * The result is a new mask handle owned by the caller.
 *
 * # Safety
 * `g` must be a live handle; `out` valid for writing.
 */
enum CtnStatus ctn_local_search(const struct CtnGraph *g,
                                uint32_t len,
                                uint64_t seed,
                                uint64_t budget,
                                struct CtnMask **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CTN_H */
