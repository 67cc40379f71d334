/* SPDX-License-Identifier: MIT */
/* Exercises the public C interface from plain C. */
#include "coauction/coauction.h"

#include <math.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define CHECK(cond)                                                                   \
    do {                                                                              \
        if (!(cond)) {                                                                \
            fprintf(stderr, "%s:%d: check failed: %s (%s)\n", __FILE__, __LINE__,     \
                    #cond, coa_last_error());                                         \
            ++failures;                                                               \
        }                                                                             \
    } while (0)

#define CHECK_OK(call) CHECK((call) == COA_OK)

static void test_library(void) {
    CHECK(strcmp(coa_version(), "1.0.0") == 0);
    CHECK(strcmp(coa_status_name(COA_ERR_BRACKET), "bracket") == 0);
    coa_solver_config cfg;
    coa_solver_config_default(&cfg);
    CHECK(cfg.root_abs_tol == 1e-12 && cfg.nested_grid == 2048);
}

static void test_distribution(void) {
    coa_dist* d = NULL;
    CHECK_OK(coa_dist_create(COA_UNIFORM, 0, 0, 0.0, 1.0, &d));
    double v = 0.0;
    CHECK_OK(coa_dist_cdf(d, 0.25, &v));
    CHECK(fabs(v - 0.25) < 1e-15);
    CHECK_OK(coa_dist_inverse_hazard(d, 0.25, &v));
    CHECK(fabs(v - 0.75) < 1e-15);

    coa_check checks[8];
    size_t count = 0;
    int all_pass = 0;
    CHECK_OK(coa_dist_validate(d, checks, 8, &count, &all_pass));
    CHECK(count == 4 && all_pass == 1);

    char small[4];
    CHECK(coa_dist_describe(d, small, sizeof small) == COA_ERR_BUFFER_TOO_SMALL);
    char buf[128];
    CHECK_OK(coa_dist_describe(d, buf, sizeof buf));
    CHECK(strlen(buf) > 0);

    CHECK(coa_dist_cdf(d, 2.0, &v) == COA_ERR_DOMAIN);
    CHECK(strlen(coa_last_error()) > 0);
    coa_dist_destroy(d);

    coa_dist* bad = NULL;
    CHECK(coa_dist_create(COA_UNIFORM, 0, 0, 1.0, 0.0, &bad) == COA_ERR_INVALID_ARGUMENT);
    CHECK(bad == NULL);
    CHECK(coa_dist_cdf(NULL, 0.5, &v) == COA_ERR_INVALID_ARGUMENT);
    coa_dist_destroy(NULL);
}

static void test_sharing(void) {
    coa_dist* d = NULL;
    CHECK_OK(coa_dist_create(COA_UNIFORM, 0, 0, 0.0, 1.0, &d));
    const coa_mode wp = {COA_WINNER_PIVOTAL, 0.0};
    coa_sharing s;
    CHECK_OK(coa_alpha_star(wp, d, 1.0, NULL, &s));
    CHECK(s.branch == COA_BRANCH_INTERIOR && fabs(s.alpha - 0.3176721961719807) < 1e-10);
    double p = 0.0;
    CHECK_OK(coa_phi(wp, d, 1.0, NULL, &p));
    CHECK(fabs(p - 0.694492471211682) < 1e-9);
    double back = 0.0;
    CHECK_OK(coa_phi_inverse(wp, d, p, NULL, &back));
    CHECK(fabs(back - 1.0) < 1e-8);

    double a = 0, b = 0, h = 0;
    CHECK_OK(coa_nested_coefficients(0.5, 1.0, &a, &b, &h));
    CHECK(fabs(b - h) < 1e-15);
    CHECK(coa_nested_coefficients(1.5, 0.5, &a, &b, &h) == COA_ERR_DOMAIN);

    double es = 0, eb = 0;
    CHECK_OK(coa_efforts(wp, 0.5, 1.0, 1.0, &es, &eb));
    CHECK(eb > es);

    const coa_mode bogus = {(coa_mode_kind)42, 0.0};
    CHECK(coa_phi(bogus, d, 0.5, NULL, &p) == COA_ERR_INVALID_ARGUMENT);
    coa_solver_config cfg;
    coa_solver_config_default(&cfg);
    cfg.root_abs_tol = -1.0;
    CHECK(coa_phi(wp, d, 0.5, &cfg, &p) == COA_ERR_INVALID_ARGUMENT);
    coa_dist_destroy(d);
}

static void test_market(void) {
    coa_dist* u = NULL;
    coa_dist* pw = NULL;
    CHECK_OK(coa_dist_create(COA_UNIFORM, 0, 0, 0.0, 1.0, &u));
    CHECK_OK(coa_dist_create(COA_POWER, 2.0, 0, 0.0, 1.0, &pw));
    const coa_dist* dists[2] = {u, pw};
    const int ids[2] = {7, 9};
    const coa_mode sp = {COA_SELLER_PIVOTAL, 0.0};
    coa_market* m = NULL;
    CHECK_OK(coa_market_create(ids, dists, 2, sp, NULL, 1, &m));
    /* The market copies its laws. */
    coa_dist_destroy(u);
    coa_dist_destroy(pw);
    CHECK(coa_market_size(m) == 2);

    const double types[2] = {0.8, 0.6};
    coa_direct_outcome direct;
    CHECK_OK(coa_run_direct(m, types, 2, 11, COA_EVAL_EXACT, &direct));
    CHECK(direct.winner_id == 7 || direct.winner_id == 9);

    coa_auction_config ac;
    coa_auction_config_default(&ac);
    ac.epsilon = 0.01;
    coa_auction_outcome auc;
    double exits[2];
    int order[2];
    CHECK_OK(coa_run_auction(m, types, 2, &ac, 11, COA_EVAL_EXACT, &auc, exits, order));
    CHECK(auc.winner_id == direct.winner_id);
    CHECK(order[1] == auc.winner_id && exits[0] <= exits[1]);
    CHECK(fabs(auc.contract_alpha - (direct.alpha - 0.01)) < 1e-12);
    CHECK(coa_run_auction(m, types, 1, &ac, 11, COA_EVAL_EXACT, &auc, NULL, NULL) == COA_ERR_INVALID_ARGUMENT);

    double drawn[2];
    double again[2];
    CHECK_OK(coa_market_sample_types(m, 3, 5, drawn, 2));
    CHECK_OK(coa_market_sample_types(m, 3, 5, again, 2));
    CHECK(drawn[0] == again[0] && drawn[1] == again[1]);

    coa_equivalence eq;
    CHECK_OK(coa_revenue_equivalence(m, &ac, 200, 1, COA_EVAL_CACHED, &eq));
    CHECK(eq.difference.count == 200 && eq.clamped_draws == 0);

    const double eps[3] = {0.01, 0.05, 0.1};
    coa_equivalence reps[3];
    coa_estimate drops[2];
    int monotone = 0;
    double margin = 0.0;
    CHECK_OK(coa_epsilon_sweep(m, eps, 3, 200, 1, COA_EVAL_CACHED, reps, drops, &monotone, &margin));
    CHECK(reps[0].epsilon == 0.1 && reps[2].epsilon == 0.01);
    CHECK(monotone == 1);

    double reports[5] = {0.2, 0.4, 0.6, 0.8, 1.0};
    double gains[5];
    coa_audit_summary audit;
    CHECK_OK(coa_ic_audit(m, 7, 0.6, reports, 5, gains, &audit));
    CHECK(audit.max_gain <= 1e-9);
    CHECK(coa_ic_audit(m, 99, 0.6, reports, 5, gains, &audit) == COA_ERR_INVALID_ARGUMENT);

    double prob = 0.0;
    CHECK_OK(coa_win_probability(m, 9, 0.5, COA_EVAL_EXACT, &prob));
    CHECK(prob > 0.0 && prob < 1.0);
    coa_market_destroy(m);
}

static void test_auction_rejects_effort_substitution(void) {
    coa_dist* u = NULL;
    CHECK_OK(coa_dist_create(COA_UNIFORM, 0, 0, 0.0, 1.0, &u));
    const coa_dist* dists[1] = {u};
    const int ids[1] = {1};
    const coa_mode es = {COA_EFFORT_SUBSTITUTION, 0.0};
    coa_market* m = NULL;
    CHECK_OK(coa_market_create(ids, dists, 1, es, NULL, 0, &m));
    const double types[1] = {0.5};
    coa_auction_outcome auc;
    CHECK(coa_run_auction(m, types, 1, NULL, 0, COA_EVAL_EXACT, &auc, NULL, NULL) == COA_ERR_INVALID_ARGUMENT);
    coa_market_destroy(m);
    coa_dist_destroy(u);
}

int main(void) {
    test_library();
    test_distribution();
    test_sharing();
    test_market();
    test_auction_rejects_effort_substitution();
    if (failures != 0) {
        fprintf(stderr, "%d C API check(s) failed\n", failures);
        return 1;
    }
    printf("C API checks passed\n");
    return 0;
}
