/* Exercises the C interface from C. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include <wph/wph.h>

static int failures = 0;

#define EXPECT(cond)                                                        \
    do {                                                                    \
        if (!(cond)) {                                                      \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                     \
        }                                                                   \
    } while (0)

int main(void)
{
    wph_options opts;
    wph_family* fam = NULL;
    wph_family* norm = NULL;
    wph_outcome outcome;
    char* json = NULL;
    const int64_t weights[] = {1, 1, 1, 2, 3};
    const int64_t bad[] = {2, 4, 6};

    wph_options_default(&opts);
    EXPECT(opts.oracle_budget == 2000000);
    EXPECT(opts.indent == 2);
    opts.indent = -1;

    EXPECT(strcmp(wph_version(), "1.0.0") == 0);
    EXPECT(wph_is_prime(23) == 1);
    EXPECT(wph_is_prime(850) == 0);

    EXPECT(wph_family_new(weights, 5, 6, &fam) == WPH_OK);
    EXPECT(wph_family_size(fam) == 5);
    EXPECT(wph_family_weight(fam, 4) == 3);
    EXPECT(wph_family_degree(fam) == 6);
    EXPECT(wph_family_well_formed(fam) == 1);
    EXPECT(wph_family_mm_hypothesis(fam) == 1);
    EXPECT(wph_family_lin_finite(fam) == 1);
    EXPECT(wph_family_linear_cone(fam) == 0);
    EXPECT(wph_family_quasismooth_exists(fam) == 1);

    EXPECT(wph_orders_report(fam, &opts, &json, &outcome) == WPH_OK);
    EXPECT(outcome == WPH_OUTCOME_OK);
    EXPECT(json != NULL && strstr(json, "\"certified\":[2,3,4,5,7,8,9,25]") != NULL);
    wph_string_free(json);
    json = NULL;

    EXPECT(wph_check_report(fam, 12, &opts, &json, &outcome) == WPH_E_NOT_PRIME_POWER);
    EXPECT(json == NULL);
    EXPECT(strlen(wph_last_error()) > 0);

    EXPECT(wph_check_report(fam, 7, &opts, &json, &outcome) == WPH_OK);
    EXPECT(strstr(json, "divides-d(c)") != NULL);
    wph_string_free(json);
    wph_family_free(fam);

    fam = NULL;
    EXPECT(wph_family_new(bad, 3, 12, &fam) == WPH_E_HYPOTHESIS);
    EXPECT(fam == NULL);
    EXPECT(wph_family_parse("1,1,x d=3", &fam) == WPH_E_PARSE);
    EXPECT(wph_family_parse("1,2,2,2 d=4", &fam) == WPH_OK);
    EXPECT(wph_family_well_formed(fam) == 0);
    EXPECT(wph_family_quasismooth_exists(fam) == -1);
    EXPECT(wph_family_normalize(fam, &norm) == WPH_OK);
    EXPECT(wph_family_degree(norm) == 2);
    EXPECT(wph_family_weight(norm, 3) == 1);
    EXPECT(wph_klein_report(norm, &opts, &json) == WPH_OK);
    EXPECT(strstr(json, "\"quasismooth\":false") != NULL);
    wph_string_free(json);
    wph_family_free(norm);

    EXPECT(wph_orders_report(fam, &opts, &json, &outcome) == WPH_OK);
    EXPECT(outcome == WPH_OUTCOME_HYPOTHESIS);
    wph_string_free(json);
    wph_family_free(fam);

    EXPECT(wph_family_parse("3,7,2,4,5 d=37", &fam) == WPH_OK);
    opts.oracle_budget = 3;
    EXPECT(wph_check_report(fam, 23, &opts, &json, &outcome) == WPH_OK);
    EXPECT(outcome == WPH_OUTCOME_BUDGET);
    wph_string_free(json);
    wph_family_free(fam);

    EXPECT(wph_orders_report(NULL, &opts, &json, &outcome) == WPH_E_USAGE);
    EXPECT(wph_suite_size() == 7);
    EXPECT(strcmp(wph_suite_name(0), "counterexample") == 0);
    EXPECT(wph_suite_name(7) == NULL);
    wph_family_free(NULL);
    wph_string_free(NULL);

    if (failures)
        fprintf(stderr, "%d failure(s)\n", failures);
    return failures ? EXIT_FAILURE : EXIT_SUCCESS;
}
