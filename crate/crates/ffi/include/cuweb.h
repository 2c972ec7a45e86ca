#ifndef CUWEB_H
#define CUWEB_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum CuwebStatus {
  CUWEB_STATUS_OK = 0,
  CUWEB_STATUS_NULL_POINTER = 1,
  CUWEB_STATUS_INVALID_UTF8 = 2,
  CUWEB_STATUS_PARSE = 3,
  CUWEB_STATUS_WRONG_DOCUMENT = 4,
  CUWEB_STATUS_WEB = 5,
  CUWEB_STATUS_UNKNOWN_AXIOM = 6,
  CUWEB_STATUS_INFEASIBLE = 7,
  CUWEB_STATUS_PANIC = 8,
} CuwebStatus;

/**
 * A finite positively ordered monoid.
 */
typedef struct CuwebMonoid CuwebMonoid;

/**
 * A system of abelian groups over a finite monoid.
 */
typedef struct CuwebSystem CuwebSystem;

/**
 * A materialized web.
 */
typedef struct CuwebWeb CuwebWeb;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *cuweb_last_error_message(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cuweb_string_free(char *s);

/**
 * Parses a monoid document.
 *
 * # Safety
 * `json` is a nul-terminated string, `out` is writable.
 */
enum CuwebStatus cuweb_monoid_from_json(const char *json, struct CuwebMonoid **out);

/**
 * # Safety
 * `m` is null or a live monoid handle.
 */
void cuweb_monoid_free(struct CuwebMonoid *m);

/**
 * # Safety
 * `m` is a live monoid handle.
 */
uintptr_t cuweb_monoid_size(const struct CuwebMonoid *m);

/**
 * Canonical JSON of a monoid.
 *
 * # Safety
 * `m` is a live monoid handle, `out` is writable.
 */
enum CuwebStatus cuweb_monoid_to_json(const struct CuwebMonoid *m, char **out);

/**
 * Parses a system document.
 *
 * # Safety
 * `json` is a nul-terminated string, `out` is writable.
 */
enum CuwebStatus cuweb_system_from_json(const char *json, struct CuwebSystem **out);

/**
 * # Safety
 * `s` is null or a live system handle.
 */
void cuweb_system_free(struct CuwebSystem *s);

/**
 * Canonical JSON of a system.
 *
 * # Safety
 * `s` is a live system handle, `out` is writable.
 */
enum CuwebStatus cuweb_system_to_json(const struct CuwebSystem *s, char **out);

/**
 * Builds the web of a system. A negative `window` means no window, which fails on Z fibers.
 *
 * # Safety
 * `s` is a live system handle, `out` is writable.
 */
enum CuwebStatus cuweb_web_new(const struct CuwebSystem *s, int64_t window, struct CuwebWeb **out);

/**
 * # Safety
 * `w` is null or a live web handle.
 */
void cuweb_web_free(struct CuwebWeb *w);

/**
 * # Safety
 * `w` is a live web handle.
 */
uintptr_t cuweb_web_size(const struct CuwebWeb *w);

/**
 * Tables of a web as canonical JSON.
 *
 * # Safety
 * `w` is a live web handle, `out` is writable.
 */
enum CuwebStatus cuweb_web_to_json(const struct CuwebWeb *w, char **out);

/**
 * Checks one axiom (`"PC"`, `"AU"`, ...) on a web. `verdict_json` may be null; otherwise it
 * receives the verdict with its witness.
 *
 * # Safety
 * `w` is a live web handle, `tag` a nul-terminated string, `holds` writable.
 */
enum CuwebStatus cuweb_web_check_axiom(const struct CuwebWeb *w,
                                       const char *tag,
                                       bool *holds,
                                       char **verdict_json);

/**
 * Same as [`cuweb_web_check_axiom`] on a monoid.
 *
 * # Safety
 * `m` is a live monoid handle, `tag` a nul-terminated string, `holds` writable.
 */
enum CuwebStatus cuweb_monoid_check_axiom(const struct CuwebMonoid *m,
                                          const char *tag,
                                          bool *holds,
                                          char **verdict_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUWEB_H */
