/* C API for the opmassey calculator: exact-arithmetic Massey products in the
 * homology of differential graded algebras over operad presentations.
 *
 * Conventions:
 *   - constructors return NULL on failure; mp_last_error() describes the
 *     most recent failure on the calling thread;
 *   - char* results are owned by the caller and released with
 *     mp_string_free();
 *   - handles are opaque and released with their matching _free function.
 *
 * This header is maintained by hand; the `header_matches_exports` test keeps
 * it in sync with the symbols the library exports.
 */

#ifndef OPMASSEY_H
#define OPMASSEY_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* A parsed problem document (JSON schema; see the project README). */
typedef struct MpDocument MpDocument;

/* A finished computation: report plus exit code. */
typedef struct MpReport MpReport;

/* Commands accepted by mp_run. */
enum {
  MP_COMMAND_VALIDATE = 0,
  MP_COMMAND_HOMOLOGY = 1,
  MP_COMMAND_MASSEY = 2
};

/* Relation-check scope. */
enum {
  MP_SCOPE_PAPER = 0, /* tuples declared by the document */
  MP_SCOPE_FULL = 1   /* all basis tuples */
};

/* Message for the most recent failure on this thread, or NULL. Valid until
 * the next failing call on the same thread. */
const char *mp_last_error(void);

/* Parse a JSON problem document. NULL on schema errors. */
MpDocument *mp_document_from_json(const char *json);

void mp_document_free(MpDocument *doc);

/* Run a command. `seed` is the default seed for random-mode queries
 * (negative for none). NULL on usage/schema errors. */
MpReport *mp_run(const MpDocument *doc, int command, int scope, int verbose,
                 long long seed);

/* 0 = success, 1 = validation failure, 2 = undefined Massey product,
 * -1 = NULL report. */
int mp_report_exit_code(const MpReport *report);

/* JSON / text renderings of the report; free with mp_string_free. */
char *mp_report_json(const MpReport *report);
char *mp_report_text(const MpReport *report);

void mp_report_free(MpReport *report);

/* One canned example document as JSON: "heisenberg-ce",
 * "heisenberg-gerstenhaber", or "heisenberg-hypercom". */
char *mp_example_document(const char *name);

void mp_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* OPMASSEY_H */
