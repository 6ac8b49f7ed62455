#include <stdio.h>
#include <string.h>

#include "invspan.h"

static const char *INSTANCE =
    "{\"elements\": [\"a\", \"b\", \"c\", \"d\"],"
    " \"weights\": {\"a\": \"1\", \"b\": \"1\", \"c\": \"1\", \"d\": \"1\"},"
    " \"costs\": [{\"a\": \"1\", \"b\": \"1\", \"c\": \"0\", \"d\": \"0\"}],"
    " \"family\": {\"kind\": \"explicit\", \"sets\": [[\"a\", \"b\"], [\"c\", \"d\"]]},"
    " \"input_solution\": [\"a\", \"b\"]}";

int main(void) {
    InvspanInstance *inst = NULL;
    if (invspan_instance_from_json(INSTANCE, &inst) != INVSPAN_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", invspan_last_error());
        return 1;
    }
    InvspanSolveOptions opts = {0, 2, false};
    InvspanSolution *sol = NULL;
    if (invspan_solve(inst, &opts, &sol) != INVSPAN_STATUS_OK) {
        fprintf(stderr, "solve: %s\n", invspan_last_error());
        return 1;
    }
    char *span = NULL;
    if (invspan_solution_span(sol, &span) != INVSPAN_STATUS_OK) {
        return 1;
    }
    int ok = invspan_solution_status(sol) == INVSPAN_SOLVE_STATUS_OPTIMAL && strcmp(span, "1") == 0;
    printf("span %s\n", span);
    invspan_string_free(span);
    invspan_solution_free(sol);
    invspan_instance_free(inst);

    if (invspan_instance_from_json("{", &inst) != INVSPAN_STATUS_PARSE || invspan_last_error() == NULL) {
        return 1;
    }
    return ok ? 0 : 2;
}
