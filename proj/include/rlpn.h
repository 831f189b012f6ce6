#ifndef RLPN_H
#define RLPN_H

/* C interface to the ring toolkit. Every function that can fail returns an
 * rlpn_status; on failure a per-thread message is available through
 * rlpn_last_error(). Strings handed out through char** parameters are
 * NUL-terminated, owned by the caller, and released with rlpn_string_free().
 * Handles are opaque and released with their matching _free(); freeing NULL
 * is a no-op. Handles must not be shared across threads without external
 * locking, except that distinct handles are always independent. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Mirrors the library's internal error codes one for one. */
typedef enum rlpn_status {
    RLPN_OK = 0,
    RLPN_ERR_INVALID_ARGUMENT = 1,
    RLPN_ERR_PARSE = 2,
    RLPN_ERR_FACTORIZATION_INVALID = 3,
    RLPN_ERR_FACTORS_NOT_COPRIME = 4,
    RLPN_ERR_COMPONENT_TOO_LARGE = 5,
    RLPN_ERR_DIMENSION_TOO_LARGE = 6,
    RLPN_ERR_RANK_DEFICIENT = 7,
    RLPN_ERR_BATCH_TOO_LARGE = 8,
    RLPN_ERR_INFEASIBLE = 9,
    RLPN_ERR_INCONCLUSIVE = 10,
    RLPN_ERR_IO = 11,
    RLPN_ERR_INTERNAL = 12
} rlpn_status;

typedef struct rlpn_poly rlpn_poly;
typedef struct rlpn_ring rlpn_ring;
typedef struct rlpn_oracle rlpn_oracle;

/* Library version, static storage, never freed. */
const char* rlpn_version(void);

/* Message from the most recent failing call on this thread, static until the
 * next failing call on the same thread. Empty string when no call failed. */
const char* rlpn_last_error(void);

/* Release a string returned through a char** parameter. */
void rlpn_string_free(char* s);

/* ---- polynomials over GF(2) ---- */

/* Parse "x^127+x^8+x^7+x^3+1", "0", or "1". */
rlpn_status rlpn_poly_parse(const char* text, rlpn_poly** out);
rlpn_status rlpn_poly_format(const rlpn_poly* p, char** out);
/* Degree of the zero polynomial is reported as -1. */
int rlpn_poly_degree(const rlpn_poly* p);
int rlpn_poly_weight(const rlpn_poly* p);
/* 1 if irreducible over GF(2), 0 otherwise. */
int rlpn_poly_is_irreducible(const rlpn_poly* p);
void rlpn_poly_free(rlpn_poly* p);

/* ---- rings ---- */

/* Accepts a preset name ("lapin-621", "desk-33", "desk-51", "small-16") or a
 * path to a ring file whose JSON lists the factors. */
rlpn_status rlpn_ring_open(const char* name_or_path, rlpn_ring** out);
/* Build from JSON text directly: {"factors": ["x^7+x+1", ...]}. */
rlpn_status rlpn_ring_from_json(const char* json_text, rlpn_ring** out);
int rlpn_ring_degree(const rlpn_ring* ring);
size_t rlpn_ring_factor_count(const rlpn_ring* ring);
rlpn_status rlpn_ring_factor(const rlpn_ring* ring, size_t index, rlpn_poly** out);
/* JSON text with modulus and factors, same shape rlpn_ring_from_json reads. */
rlpn_status rlpn_ring_to_json(const rlpn_ring* ring, char** out);
void rlpn_ring_free(rlpn_ring* ring);

/* ---- presets ---- */

/* JSON array of the built-in ring names. */
rlpn_status rlpn_preset_names(char** json_out);
/* JSON object describing one preset: modulus, factors, suggested attack
 * parameters, test vector when one ships. */
rlpn_status rlpn_preset_describe(const char* name, char** json_out);

/* ---- sample oracles ---- */

/* noise is a rate like "1/6" or "0.05"; uniform_v nonzero replaces the
 * structured samples with uniform pairs (the decision problem's null case).
 * The secret is derived from the seed; _with_secret plants the given one. */
rlpn_status rlpn_oracle_new(const rlpn_ring* ring, const char* noise, uint64_t seed,
                            int uniform_v, rlpn_oracle** out);
rlpn_status rlpn_oracle_new_with_secret(const rlpn_ring* ring, const char* noise, uint64_t seed,
                                        int uniform_v, const char* secret_poly,
                                        rlpn_oracle** out);
rlpn_status rlpn_oracle_secret(const rlpn_oracle* oracle, char** out);
/* Next sample in the deterministic stream, as formatted polynomials. */
rlpn_status rlpn_oracle_sample(rlpn_oracle* oracle, char** r_out, char** v_out);
void rlpn_oracle_free(rlpn_oracle* oracle);

/* ---- runs ---- */

/* Execute one toolkit command and collect its JSON-lines report.
 *   command       analyze | attack | recover | simulate | tables | bench
 *   options_json  command options as a JSON object, NULL or "" for defaults
 *   records_out   newline-terminated JSON records, one per line
 *   conclusive_out  1 when the run reached a confident result, 0 when it
 *                   finished but the evidence was below threshold (optional,
 *                   may be NULL)
 * ring accepts the same names and paths as rlpn_ring_open. threads <= 0 and
 * memory_budget == 0 select the defaults (1 worker, 1 GiB). */
rlpn_status rlpn_run(const char* ring, uint64_t seed, int threads, uint64_t memory_budget,
                     const char* command, const char* options_json, char** records_out,
                     int* conclusive_out);

#ifdef __cplusplus
}
#endif

#endif
