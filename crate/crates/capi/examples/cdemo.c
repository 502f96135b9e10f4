#include <stdio.h>
#include <stdlib.h>
#include "opmassey.h"

int main(void) {
  char *json = mp_example_document("heisenberg-hypercom");
  if (!json) { fprintf(stderr, "example: %s\n", mp_last_error()); return 1; }
  MpDocument *doc = mp_document_from_json(json);
  mp_string_free(json);
  if (!doc) { fprintf(stderr, "parse: %s\n", mp_last_error()); return 1; }
  MpReport *report = mp_run(doc, MP_COMMAND_MASSEY, MP_SCOPE_PAPER, 0, -1);
  if (!report) { fprintf(stderr, "run: %s\n", mp_last_error()); return 1; }
  printf("exit code: %d\n", mp_report_exit_code(report));
  char *text = mp_report_text(report);
  puts(text);
  mp_string_free(text);
  mp_report_free(report);
  mp_document_free(doc);
  return 0;
}
