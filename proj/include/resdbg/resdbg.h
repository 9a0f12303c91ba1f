#ifndef RESDBG_H
#define RESDBG_H

/*
 * C interface to the residue debugger. All entry points are thread-safe as
 * long as each rd_context (and the objects created through it) is used from
 * one thread at a time; distinct contexts are independent.
 *
 * Every function that can fail takes the context first and reports details
 * via rd_last_error(ctx). Returned objects are owned by the caller and must
 * be released with the matching *_free.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rd_status {
    RD_OK = 0,
    RD_ERR_BAD_ARG = 1,  /* null pointer, unknown option/backend, bad value */
    RD_ERR_PARSE = 2,    /* program text is not well-formed */
    RD_ERR_VALIDATE = 3, /* program parsed but failed semantic checks */
    RD_ERR_RUNTIME = 4,  /* execution failed (op budget, re-execution guard) */
    RD_ERR_IO = 5        /* file or state-directory access failed */
} rd_status;

typedef struct rd_context rd_context;
typedef struct rd_program rd_program;
typedef struct rd_inputset rd_inputset;
typedef struct rd_report rd_report;

/* ---- context ---- */

rd_context* rd_context_new(void);
void rd_context_free(rd_context* ctx);

/* Message for the most recent failing call on this context ("" if none). */
const char* rd_last_error(const rd_context* ctx);

/*
 * Options (all values are strings):
 *   "ro"                 "on"|"off"   drive repo runs through re-execution (default on)
 *   "max-reexec"         integer      execution cap per drive (default 20)
 *   "warn-ulps"          number       warn when ulps >= 2^N (default 45)
 *   "cond-threshold"     number       isZero condition trigger, as 2^N (default 40)
 *   "absorb-ulps"        number       isAbsorbed slack in ulps (default 4)
 *   "trick"              "on"|"off"   rounding-trick detection (default on)
 *   "oracle-bits"        integer      truth precision (default 512)
 *   "margin"             number|"none" scoring threshold band (default 1)
 *   "state-dir"          path         persist re-execution state ("" = off)
 *   "threads"            integer      corpus worker threads (0 = auto)
 *   "zero-ulp-denormal"  "on"|"off"   ulp(0) = smallest denormal (default off)
 *   "timing"             "on"|"off"   measure hook time in run reports
 */
rd_status rd_context_set_option(rd_context* ctx, const char* key, const char* value);

/* ---- programs ---- */

rd_status rd_program_parse(rd_context* ctx, const char* source, rd_program** out);
rd_status rd_program_load(rd_context* ctx, const char* path, rd_program** out);
void rd_program_free(rd_program* prog);
int rd_program_arity(const rd_program* prog);

/* ---- input sets ---- */

/* Multi-line positional format: one whitespace-separated vector per line,
 * '#' comments; a token of exactly 16 hex digits is an IEEE-754 bit pattern. */
rd_status rd_inputs_parse(rd_context* ctx, const rd_program* prog, const char* text,
                          rd_inputset** out);
rd_status rd_inputs_load(rd_context* ctx, const rd_program* prog, const char* path,
                         rd_inputset** out);

/* One vector, either named ("x=1e99 w=2.0") or positional ("1e99 2.0"). */
rd_status rd_inputs_assign(rd_context* ctx, const rd_program* prog, const char* text,
                           rd_inputset** out);

/* Deterministic generator, e.g. "seed=101,count=100,e=[54,250],sign=pos". */
rd_status rd_inputs_generate(rd_context* ctx, const rd_program* prog, const char* genspec,
                             rd_inputset** out);

void rd_inputs_free(rd_inputset* inputs);
long long rd_inputs_count(const rd_inputset* inputs);

/* ---- runs and comparisons ---- */

/* Backends: "repo", "eftsan-fixed", "eftsan-buggy", "dd", "oracle",
 * "oracle:BITS". "repo+ro" forces the re-execution drive on regardless of
 * the "ro" option; plain "repo" follows the option. */
rd_status rd_run(rd_context* ctx, const rd_program* prog, const rd_inputset* inputs,
                 long long index, const char* backend, rd_report** out);

/* Scores `test_backend` against `truth_backend` (default "oracle:<bits>"
 * when null or empty) on one input vector. */
rd_status rd_compare(rd_context* ctx, const rd_program* prog, const rd_inputset* inputs,
                     long long index, const char* test_backend, const char* truth_backend,
                     rd_report** out);

/* Bundled corpus sweep. `entries` and `backends` are comma-separated; null
 * or empty mean all entries / the standard comparison columns. In backend
 * lists "repo" always means a single execution and "repo+ro" the drive. */
rd_status rd_corpus_run(rd_context* ctx, const char* entries, const char* backends,
                        rd_report** out);

/* Warning-set stability of the oracle at `bits` vs `2*bits` over the corpus
 * (bits <= 0 selects the "oracle-bits" option). */
rd_status rd_oracle_check(rd_context* ctx, const char* entries, int bits, rd_report** out);

/* Embedded corpus introspection. Strings live in static storage; the source
 * and genspec lookups return null for unknown entry names. */
const char* rd_corpus_entries(void);
const char* rd_corpus_source(const char* entry);
const char* rd_corpus_genspec(const char* entry);

/* ---- reports ---- */

/* Human-readable rendering; owned by the report. */
const char* rd_report_text(const rd_report* rep);

/* Machine-readable rendering (JSON, stable field order); owned by the report. */
const char* rd_report_json(const rd_report* rep);

/*
 * Numeric lookups:
 *   run reports:      "warnings", "executions", "capHit", "output", "opCount"
 *   compare reports:  "fp", "fn", "total", "testWarnings", "truthWarnings"
 *   corpus reports:   "fp", "fn", "executions", "capHits" (grand totals) or
 *                     "fp/<entry>/<column>" etc. for one cell
 *   oracle checks:    "identical", "mismatches", "inputs"
 */
rd_status rd_report_stat(const rd_report* rep, const char* key, double* out);

void rd_report_free(rd_report* rep);

const char* rd_version(void);

#ifdef __cplusplus
}
#endif

#endif /* RESDBG_H */
