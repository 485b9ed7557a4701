#ifndef HOLOCERT_H
#define HOLOCERT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define HC_OK 0

/**
 * Invalid input: unknown series, malformed JSON, bad prime, ...
 */
#define HC_ERR_INPUT 1

/**
 * A computed identity or reconstruction failed.
 */
#define HC_ERR_VERIFY 2

/**
 * A height bound was exceeded.
 */
#define HC_ERR_BOUND 3

/**
 * A required pointer argument was null.
 */
#define HC_ERR_NULL -1

/**
 * A string argument was not valid UTF-8.
 */
#define HC_ERR_UTF8 -2

/**
 * Internal panic caught at the boundary.
 */
#define HC_ERR_PANIC -3

/**
 * Named series: the builtin entries plus any added from JSON.
 */
typedef struct HcCatalog HcCatalog;

/**
 * A certificate together with the name of its series.
 */
typedef struct HcCertificate HcCertificate;

/**
 * A differential operator over the rationals.
 */
typedef struct HcOperator HcOperator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *hc_version(void);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next `hc_*` call on the same thread.
 */
const char *hc_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void hc_string_free(char *s);

/**
 * A catalog holding the builtin series.
 */
struct HcCatalog *hc_catalog_new(void);

/**
 * # Safety
 * `cat` must be null or a handle from `hc_catalog_new`, not used afterwards.
 */
void hc_catalog_free(struct HcCatalog *cat);

/**
 * Adds entries from catalog JSON (one object or an array).
 *
 * # Safety
 * `cat` must be a live catalog handle and `json` a nul-terminated string.
 */
int32_t hc_catalog_extend_json(struct HcCatalog *cat, const char *json);

/**
 * Writes the first `t` coefficients of `name` reduced mod `p` into `out`,
 * which must hold `t` values.
 *
 * # Safety
 * `cat` must be a live catalog handle, `name` a nul-terminated string and
 * `out` valid for `t` writes.
 */
int32_t hc_expand_mod_p(const struct HcCatalog *cat,
                        const char *name,
                        size_t t,
                        uint64_t p,
                        uint64_t *out);

/**
 * The first `t` exact coefficients of `name` as a JSON array of strings.
 *
 * # Safety
 * `cat` must be a live catalog handle, `name` a nul-terminated string and
 * `out` a valid pointer.
 */
int32_t hc_expand_json(const struct HcCatalog *cat, const char *name, size_t t, char **out);

/**
 * Parses operator JSON.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
int32_t hc_operator_from_json(const char *json, struct HcOperator **out);

/**
 * The annihilating operator of a catalog series, in δ form.
 *
 * # Safety
 * `cat` must be a live catalog handle, `name` a nul-terminated string and
 * `out` a valid pointer.
 */
int32_t hc_operator_from_series(const struct HcCatalog *cat,
                                const char *name,
                                struct HcOperator **out);

/**
 * # Safety
 * `op` must be null or an operator handle, not used afterwards.
 */
void hc_operator_free(struct HcOperator *op);

/**
 * # Safety
 * `op` must be a live operator handle and `out` a valid pointer.
 */
int32_t hc_operator_order(const struct HcOperator *op, size_t *out);

/**
 * # Safety
 * `op` must be a live operator handle and `out` a valid pointer.
 */
int32_t hc_operator_is_mom(const struct HcOperator *op, bool *out);

/**
 * Singularities, indicial polynomial, MOM verdict, good primes up to
 * `bound` and p-curvature nilpotency at the `n` given primes, as JSON.
 *
 * # Safety
 * `op` must be a live operator handle, `primes` valid for `n` reads and
 * `out` a valid pointer.
 */
int32_t hc_operator_report_json(const struct HcOperator *op,
                                const uint64_t *primes,
                                size_t n,
                                uint64_t bound,
                                char **out);

/**
 * Assembles and verifies the certificate of `name` at `p`. `t = 0`
 * selects the default verification order.
 *
 * # Safety
 * `cat` must be a live catalog handle, `name` a nul-terminated string and
 * `out` a valid pointer.
 */
int32_t hc_certify(const struct HcCatalog *cat,
                   const char *name,
                   uint64_t p,
                   size_t t,
                   struct HcCertificate **out);

/**
 * Parses a certificate emitted by `hc_certificate_to_json` or the CLI.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
int32_t hc_certificate_from_json(const char *json, struct HcCertificate **out);

/**
 * # Safety
 * `cert` must be null or a certificate handle, not used afterwards.
 */
void hc_certificate_free(struct HcCertificate *cert);

/**
 * Level `l`, reduced height of `A` and verification order.
 *
 * # Safety
 * `cert` must be a live certificate handle; the outputs valid pointers.
 */
int32_t hc_certificate_info(const struct HcCertificate *cert,
                            uint32_t *level,
                            size_t *height,
                            size_t *verified_to);

/**
 * # Safety
 * `cert` must be a live certificate handle and `out` a valid pointer.
 */
int32_t hc_certificate_to_json(const struct HcCertificate *cert, char **out);

/**
 * Re-checks the certificate identity against a fresh expansion of its
 * series from `cat`.
 *
 * # Safety
 * `cat` and `cert` must be live handles and `pass` a valid pointer.
 */
int32_t hc_certificate_verify(const struct HcCatalog *cat,
                              const struct HcCertificate *cert,
                              bool *pass);

/**
 * Runs the comma-separated `cases` (`210`, `26`, `2f1`, `independence`,
 * `apery` or `all`) at the given primes with default options and
 * returns the batch report as JSON. Failing checks do not make the call
 * fail; inspect the report.
 *
 * # Safety
 * `cases` must be a nul-terminated string, `primes` valid for `n` reads
 * and `out` a valid pointer.
 */
int32_t hc_casebook_json(const char *cases, const uint64_t *primes, size_t n, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOLOCERT_H */
