#ifndef LYAGRAPH_H
#define LYAGRAPH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define LYA_TARGET_S2XS1 0

#define LYA_TARGET_S3 1

#define LYA_FORMAT_DSL 0

#define LYA_FORMAT_JSON 1

typedef enum LyaStatus {
  LYA_STATUS_OK = 0,
  LYA_STATUS_NULL_POINTER = 1,
  LYA_STATUS_INVALID_UTF8 = 2,
  LYA_STATUS_PARSE_ERROR = 3,
  LYA_STATUS_INVALID_ARGUMENT = 4,
  LYA_STATUS_PANIC = 5,
} LyaStatus;

/**
 * A parsed Lyapunov graph.
 */
typedef struct LyaGraph LyaGraph;

/**
 * The outcome of checking a graph against one target.
 */
typedef struct LyaReport LyaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a graph in either the DSL or the JSON format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum LyaStatus lya_graph_parse(const char *text, struct LyaGraph **out);

/**
 * # Safety
 * `graph` must be null or a handle from this library not yet freed.
 */
void lya_graph_free(struct LyaGraph *graph);

/**
 * The time-reversed graph, as a new handle.
 *
 * # Safety
 * `graph` must be a live handle and `out` a writable pointer.
 */
enum LyaStatus lya_graph_reverse(const struct LyaGraph *graph, struct LyaGraph **out);

/**
 * Renders the graph as `LYA_FORMAT_DSL` or `LYA_FORMAT_JSON`.
 *
 * # Safety
 * `graph` must be a live handle and `out` a writable pointer.
 */
enum LyaStatus lya_graph_render(const struct LyaGraph *graph, uint32_t format, char **out);

/**
 * # Safety
 * `graph` must be a live handle and `out` a writable pointer.
 */
enum LyaStatus lya_graph_vertex_count(const struct LyaGraph *graph, size_t *out);

/**
 * # Safety
 * `graph` must be a live handle and `out` a writable pointer.
 */
enum LyaStatus lya_graph_edge_count(const struct LyaGraph *graph, size_t *out);

/**
 * `|E| - |V| + 1`; `LYA_STATUS_INVALID_ARGUMENT` when the graph is not
 * connected.
 *
 * # Safety
 * `graph` must be a live handle and `out` a writable pointer.
 */
enum LyaStatus lya_graph_cycle_rank(const struct LyaGraph *graph, size_t *out);

/**
 * Checks the graph against `LYA_TARGET_S2XS1` or `LYA_TARGET_S3`.
 *
 * # Safety
 * `graph` must be a live handle and `out` a writable pointer.
 */
enum LyaStatus lya_check(const struct LyaGraph *graph, uint32_t target, struct LyaReport **out);

/**
 * # Safety
 * `report` must be a live handle and `out` a writable pointer.
 */
enum LyaStatus lya_report_realizable(const struct LyaReport *report, bool *out);

/**
 * Renders the report as text, or as JSON when `json` is true.
 *
 * # Safety
 * `report` must be a live handle and `out` a writable pointer.
 */
enum LyaStatus lya_report_render(const struct LyaReport *report, bool json, char **out);

/**
 * # Safety
 * `report` must be null or a handle from this library not yet freed.
 */
void lya_report_free(struct LyaReport *report);

/**
 * `k` of the `n` by `n` nonnegative matrix stored row-major in `entries`.
 *
 * # Safety
 * `entries` must point to `n * n` readable values and `out` must be a
 * writable pointer.
 */
enum LyaStatus lya_k_invariant(const int64_t *entries, size_t n, size_t *out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void lya_string_free(char *s);

/**
 * The message for the last failed call on this thread, or null. The
 * pointer stays valid until the next call into this library on the same
 * thread.
 */
const char *lya_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LYAGRAPH_H */
