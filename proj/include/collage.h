#ifndef COLLAGE_H
#define COLLAGE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque collage system handle. */
typedef struct clg_system clg_system;

typedef enum {
    CLG_OK = 0,
    CLG_ERR_PARSE = 1,        /* syntax error in .clg input */
    CLG_ERR_INVALID = 2,      /* system violates a structural invariant */
    CLG_ERR_LIMIT = 3,        /* expansion longer than the given limit */
    CLG_ERR_NOT_INTERNAL = 4, /* operation requires an internal system */
    CLG_ERR_DECODE = 5,       /* solver model rejected */
    CLG_ERR_ARG = 6,          /* null pointer or bad argument */
    CLG_ERR_INTERNAL = 7      /* unexpected failure */
} clg_status;

/* Message for the most recent failure on this thread; valid until the next
   call on the same thread. Never NULL. */
const char* clg_last_error(void);

clg_status clg_parse(const char* text, clg_system** out);
void clg_free(clg_system* g);

/* Strings returned through char** outputs are owned by the caller. */
void clg_string_free(char* s);

clg_status clg_serialize(const clg_system* g, char** out);

/* CLG_OK with *report = NULL when valid; CLG_ERR_INVALID with a
   newline-separated report otherwise. */
clg_status clg_validate(const clg_system* g, char** report);

/* Expands the start symbol. CLG_ERR_LIMIT when the derived string is longer
   than limit; the exact length is then in the error message. */
clg_status clg_expand(const clg_system* g, uint64_t limit, char** out);

typedef struct {
    int m;
    int m_tr;
    int sigma;
    int grammar_tree_internal_nodes;
    int grammar_tree_leaves;
    int internal; /* boolean */
} clg_stats_t;

clg_status clg_stats(const clg_system* g, clg_stats_t* out);

/* Equivalent internal system of size at most 9m; *steps receives the number
   of elementary rewrite steps performed. */
clg_status clg_internalize(const clg_system* g, clg_system** out, uint64_t* steps);

/* MAX-SAT encoding of a text. wcnf_format: 0 = legacy `p wcnf` header,
   1 = hard-clause `h` prefix. *catalog receives the sidecar needed to decode
   a model of this instance later. */
clg_status clg_encode(const char* text, int wcnf_format, char** wcnf, char** catalog);

/* Certifies a solver model: re-checks every hard constraint, extracts the
   factorization, and rebuilds an internal system of the reported size. */
clg_status clg_decode(const char* text, const char* catalog, const char* model,
                      clg_system** out, int* size);

/* Exhaustive smallest-internal-system search; exponential, intended for
   texts of length at most ~8. max_m < 0 means unbounded; with a bound,
   exceeding it yields CLG_ERR_LIMIT. witness may be NULL; otherwise it
   receives a system realizing the optimal size. */
clg_status clg_oracle(const char* text, int max_m, int* size, clg_system** witness);

#ifdef __cplusplus
}
#endif

#endif
