#ifndef FOLKSONOMY_H
#define FOLKSONOMY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result of a call across the C boundary.
 */
typedef enum FolkStatus {
  FOLK_STATUS_OK = 0,
  FOLK_STATUS_NULL_ARGUMENT = 1,
  FOLK_STATUS_INVALID_UTF8 = 2,
  FOLK_STATUS_IO = 3,
  FOLK_STATUS_PARSE = 4,
  FOLK_STATUS_CONFIG = 5,
  FOLK_STATUS_NOT_FOUND = 6,
  FOLK_STATUS_PANIC = 7,
} FolkStatus;

/**
 * A loaded, deduplicated corpus.
 */
typedef struct FolkCorpus FolkCorpus;

/**
 * A pruned concept graph and the normalizer that built it.
 */
typedef struct FolkGraph FolkGraph;

/**
 * Loads a corpus file. `format` is `"jsonl"`, `"tsv"` or NULL to guess
 * from the extension.
 *
 * # Safety
 * `path` must be a valid C string, `format` NULL or a valid C string, and
 * `out` a valid pointer to write the handle to.
 */
enum FolkStatus folk_corpus_load(const char *path, const char *format, struct FolkCorpus **out);

/**
 * Parses a corpus held in memory; `format` is `"jsonl"` or `"tsv"`.
 *
 * # Safety
 * `text` and `format` must be valid C strings and `out` a valid pointer.
 */
enum FolkStatus folk_corpus_parse(const char *text, const char *format, struct FolkCorpus **out);

/**
 * # Safety
 * `corpus` must be NULL or a handle from this library not yet freed.
 */
void folk_corpus_free(struct FolkCorpus *corpus);

/**
 * Number of distinct records; 0 for NULL.
 *
 * # Safety
 * `corpus` must be NULL or a live handle.
 */
size_t folk_corpus_record_count(const struct FolkCorpus *corpus);

/**
 * Number of distinct users; 0 for NULL.
 *
 * # Safety
 * `corpus` must be NULL or a live handle.
 */
size_t folk_corpus_user_count(const struct FolkCorpus *corpus);

/**
 * Runs the pipeline with the default normalizer. `constraint` is
 * `"hard"`, `"soft"` or NULL for soft; `top_k` of 0 disables pruning.
 *
 * # Safety
 * `corpus` must be a live handle, `constraint` NULL or a valid C string,
 * and `out` a valid pointer.
 */
enum FolkStatus folk_graph_build(const struct FolkCorpus *corpus,
                                 const char *constraint,
                                 size_t top_k,
                                 double epsilon,
                                 struct FolkGraph **out);

/**
 * # Safety
 * `graph` must be NULL or a handle from this library not yet freed.
 */
void folk_graph_free(struct FolkGraph *graph);

/**
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t folk_graph_node_count(const struct FolkGraph *graph);

/**
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t folk_graph_edge_count(const struct FolkGraph *graph);

/**
 * Smoothed out/in degree ratio of a normalized concept.
 *
 * # Safety
 * `graph` must be a live handle, `term` a valid C string and `out` a valid
 * pointer.
 */
enum FolkStatus folk_graph_degree_ratio(const struct FolkGraph *graph,
                                        const char *term,
                                        double epsilon,
                                        double *out);

/**
 * Serializes the whole graph as `"dot"`, `"graphml"` or `"tsv"`.
 *
 * # Safety
 * `graph` must be a live handle, `format` a valid C string and `out` a
 * valid pointer.
 */
enum FolkStatus folk_graph_export(const struct FolkGraph *graph, const char *format, char **out);

/**
 * Extracts the subgraph around `concept` (normalized like the corpus) and
 * serializes it. `max_depth` of 0 means unbounded.
 *
 * # Safety
 * `graph` must be a live handle, `concept` and `format` valid C strings,
 * and `out` a valid pointer.
 */
enum FolkStatus folk_graph_extract(const struct FolkGraph *graph,
                                   const char *concept,
                                   size_t max_depth,
                                   const char *format,
                                   char **out);

/**
 * Porter stem of one lowercase ASCII word.
 *
 * # Safety
 * `word` must be a valid C string and `out` a valid pointer.
 */
enum FolkStatus folk_stem(const char *word, char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string from this library not yet freed.
 */
void folk_string_free(char *s);

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next call into this library from the same thread.
 */
const char *folk_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *folk_version(void);

#endif  /* FOLKSONOMY_H */
