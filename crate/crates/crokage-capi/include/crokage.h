/* crokage C API: load built artifacts and run JSON searches. */

#ifndef CROKAGE_H
#define CROKAGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes mirroring the CLI exit classes.
 */
typedef enum CrokageStatus {
  CrokageStatus_Ok = 0,
  /*
   Bad argument: null pointer, non-UTF-8 text, invalid query or config.
   */
  CrokageStatus_InvalidArgument = 2,
  /*
   Artifact missing, corrupt, or mismatched.
   */
  CrokageStatus_ArtifactError = 3,
  /*
   Internal failure (including caught panics).
   */
  CrokageStatus_InternalError = 4,
} CrokageStatus;

/*
 Opaque engine handle; create with `crokage_engine_open`, release with
 `crokage_engine_close`.
 */
typedef struct CrokageEngine CrokageEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 The message of the last error raised on this thread, or an empty string.
 The pointer stays valid until the next failing call on the same thread.
 */
const char *crokage_last_error_message(void);

/*
 Loads the corpus and index artifacts (and word vectors unless
 `vectors_path` is null, which disables the semantic factor) and writes an
 engine handle to `out_engine`.

 # Safety
 `corpus_path` and `indices_path` must be NUL-terminated strings;
 `vectors_path` may be null; `out_engine` must be valid for writes.
 */
enum CrokageStatus crokage_engine_open(const char *corpus_path,
                                       const char *indices_path,
                                       const char *vectors_path,
                                       struct CrokageEngine **out_engine);

/*
 Releases an engine. Passing null is a no-op.

 # Safety
 `engine` must be null or a pointer returned by `crokage_engine_open`
 that has not been closed yet.
 */
void crokage_engine_close(struct CrokageEngine *engine);

/*
 Number of answers in the loaded corpus; 0 for a null engine.

 # Safety
 `engine` must be null or a live pointer from `crokage_engine_open`.
 */
uint64_t crokage_engine_doc_count(const struct CrokageEngine *engine);

/*
 Runs one query and writes a heap-allocated JSON response (the same shape
 the HTTP endpoint returns) to `out_json`. Free it with
 `crokage_string_free`.

 # Safety
 `engine` must be a live pointer from `crokage_engine_open`; `query` must
 be a NUL-terminated string; `out_json` must be valid for writes.
 */
enum CrokageStatus crokage_engine_search_json(const struct CrokageEngine *engine,
                                              const char *query,
                                              uint32_t top_k,
                                              bool compose,
                                              char **out_json);

/*
 Frees a string returned by this library. Passing null is a no-op.

 # Safety
 `s` must be null or a pointer produced by `crokage_engine_search_json`
 that has not been freed yet.
 */
void crokage_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CROKAGE_H */
