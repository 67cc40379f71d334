/* SPDX-License-Identifier: MIT */
/*
 * C interface to the coauction library: optimal linear-payment auctions with
 * post-auction collaboration.
 *
 * Conventions
 *   - Every fallible function returns coa_status; COA_OK is zero.
 *   - On failure, coa_last_error() returns a message for the calling thread.
 *     The pointer stays valid until the next failing call on that thread.
 *   - Handles are opaque. Each *_create has a matching *_destroy, which
 *     accepts NULL.
 *   - Pointers to coa_solver_config may be NULL for library defaults.
 *   - Functions never retain caller buffers beyond the call.
 */
#ifndef COAUCTION_H
#define COAUCTION_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(COAUCTION_BUILDING)
#define COA_API __declspec(dllexport)
#else
#define COA_API __declspec(dllimport)
#endif
#else
#define COA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coa_status {
    COA_OK = 0,
    COA_ERR_INVALID_ARGUMENT = 1,
    COA_ERR_DOMAIN = 2,
    COA_ERR_DEGENERATE_DENSITY = 3,
    COA_ERR_BRACKET = 4,
    COA_ERR_CONVERGENCE = 5,
    COA_ERR_CONDITION_VIOLATED = 6,
    COA_ERR_INTERNAL = 7,
    COA_ERR_BUFFER_TOO_SMALL = 8
} coa_status;

typedef enum coa_family {
    COA_UNIFORM = 0,
    COA_TRUNCATED_EXPONENTIAL = 1, /* p1 = rate */
    COA_TRUNCATED_NORMAL = 2,      /* p1 = mu, p2 = sigma */
    COA_POWER = 3                  /* p1 = k, F = ((t - lo)/(hi - lo))^k */
} coa_family;

typedef enum coa_mode_kind {
    COA_WINNER_PIVOTAL = 0,
    COA_SELLER_PIVOTAL = 1,
    COA_EFFORT_SUBSTITUTION = 2,
    COA_NESTED = 3
} coa_mode_kind;

typedef struct coa_mode {
    coa_mode_kind kind;
    double zeta; /* read for COA_NESTED only */
} coa_mode;

typedef enum coa_branch {
    COA_BRANCH_INTERIOR = 0,
    COA_BRANCH_CORNER_ONE = 1,
    COA_BRANCH_CORNER_ZERO = 2,
    COA_BRANCH_LIMIT_AT_ZERO = 3
} coa_branch;

typedef enum coa_eval { COA_EVAL_EXACT = 0, COA_EVAL_CACHED = 1 } coa_eval;

typedef struct coa_solver_config {
    double root_abs_tol;
    int root_max_iter;
    double quad_rel_tol;
    int quad_max_depth;
    int nested_grid;
} coa_solver_config;

typedef struct coa_sharing {
    double alpha;
    coa_branch branch;
    double residual;
} coa_sharing;

typedef struct coa_check {
    char name[48];
    int pass;
    double worst_violation;
    double where;
} coa_check;

typedef struct coa_conditions {
    double alpha;
    coa_branch branch;
    double d_a;
    double d_h;
    int applicable;
    int satisfied;
} coa_conditions;

typedef struct coa_estimate {
    double mean;
    double std_error;
    int64_t count;
} coa_estimate;

typedef struct coa_direct_outcome {
    int winner_id;
    double alpha;
    double cash_winner;
    double revealed_type;
    double pivot_type;
    double effort_seller;
    double effort_winner;
    double realized_value;
    double seller_revenue;
    double winner_payoff; /* losers pay and receive nothing */
} coa_direct_outcome;

typedef struct coa_auction_config {
    double epsilon;          /* seller-pivotal only, in (0, 0.1] */
    double clock_resolution; /* reporting granularity of exit ticks */
} coa_auction_config;

typedef struct coa_auction_outcome {
    int winner_id;
    double clock_start;
    double price_runner_up;
    double price_winner;
    double contract_alpha;
    int alpha_clamped;
    double contract_cash;
    double posterior_type;
    double pivot_type;
    double effort_seller;
    double effort_winner;
    double realized_value;
    double seller_revenue;
    double winner_payoff;
} coa_auction_outcome;

typedef struct coa_equivalence {
    double epsilon;
    coa_estimate direct;
    coa_estimate auction;
    coa_estimate difference; /* direct minus auction, per draw */
    double max_abs_difference;
    int64_t clamped_draws;
} coa_equivalence;

typedef struct coa_audit_summary {
    double truthful_payoff;
    double max_gain;
    double argmax_report;
} coa_audit_summary;

typedef struct coa_dist coa_dist;
typedef struct coa_market coa_market;
typedef struct coa_auction coa_auction;

/* ---- library ---- */
COA_API const char* coa_version(void);
COA_API const char* coa_last_error(void);
COA_API const char* coa_status_name(coa_status status);
COA_API void coa_solver_config_default(coa_solver_config* out);
COA_API const char* coa_branch_name(coa_branch branch);

/* ---- distributions ---- */
COA_API coa_status coa_dist_create(coa_family family, double p1, double p2, double lo, double hi, coa_dist** out);
COA_API void coa_dist_destroy(coa_dist* dist);
COA_API coa_status coa_dist_support(const coa_dist* dist, double* lo, double* hi);
COA_API coa_status coa_dist_cdf(const coa_dist* dist, double theta, double* out);
COA_API coa_status coa_dist_pdf(const coa_dist* dist, double theta, double* out);
COA_API coa_status coa_dist_inverse_hazard(const coa_dist* dist, double theta, double* out);
COA_API coa_status coa_dist_quantile(const coa_dist* dist, double u, double* out);
/* Writes up to capacity checks; *count receives the total available. */
COA_API coa_status coa_dist_validate(const coa_dist* dist, coa_check* checks, size_t capacity, size_t* count,
                                     int* all_pass);
/* Writes a NUL-terminated description; COA_ERR_BUFFER_TOO_SMALL if it does not fit. */
COA_API coa_status coa_dist_describe(const coa_dist* dist, char* buffer, size_t capacity);

/* ---- sharing and surplus ---- */
COA_API coa_status coa_alpha_star(coa_mode mode, const coa_dist* dist, double theta, const coa_solver_config* cfg,
                                  coa_sharing* out);
COA_API coa_status coa_theta_c(const coa_dist* dist, const coa_solver_config* cfg, double* out);
COA_API coa_status coa_psi(coa_mode mode, const coa_dist* dist, double alpha, double theta, double* out);
COA_API coa_status coa_phi(coa_mode mode, const coa_dist* dist, double theta, const coa_solver_config* cfg,
                           double* out);
COA_API coa_status coa_phi_inverse(coa_mode mode, const coa_dist* dist, double p, const coa_solver_config* cfg,
                                   double* out);
COA_API coa_status coa_nested_coefficients(double alpha, double zeta, double* a, double* b, double* h);
COA_API coa_status coa_check_conditions(const coa_dist* dist, double theta, double zeta, int grid_n,
                                        coa_conditions* out);
COA_API coa_status coa_efforts(coa_mode mode, double alpha, double own_type, double posterior_mean,
                               double* effort_seller, double* effort_winner);
COA_API coa_status coa_winner_cash_payment(coa_mode mode, const coa_dist* dist, double theta_win,
                                           double theta_pivot, const coa_solver_config* cfg, double* out);
/* E[max_i phi_i] for independent bidders with the given laws, by quadrature. */
COA_API coa_status coa_expected_max_phi(coa_mode mode, const coa_dist* const* dists, size_t n,
                                        const coa_solver_config* cfg, double* out);

/* ---- markets ---- */
/* Distributions are copied; the caller keeps ownership of its handles. */
COA_API coa_status coa_market_create(const int* bidder_ids, const coa_dist* const* dists, size_t n, coa_mode mode,
                                     const coa_solver_config* cfg, int build_curves, coa_market** out);
COA_API void coa_market_destroy(coa_market* market);
COA_API size_t coa_market_size(const coa_market* market);
COA_API coa_status coa_market_phi(const coa_market* market, size_t bidder_index, double theta, coa_eval eval,
                                  double* out);
COA_API coa_status coa_market_sample_types(const coa_market* market, uint64_t seed, uint64_t draw, double* types,
                                           size_t n);
/* Tie-breaking seed the paired Monte Carlo routines use for a given draw. */
COA_API uint64_t coa_draw_seed(uint64_t seed, uint64_t draw);
COA_API coa_status coa_market_expected_max_phi(const coa_market* market, coa_eval eval, double* out);
COA_API coa_status coa_run_direct(const coa_market* market, const double* types, size_t n, uint64_t seed,
                                  coa_eval eval, coa_direct_outcome* out);
COA_API coa_status coa_simulate_direct_revenue(const coa_market* market, int64_t n_draws, uint64_t seed,
                                               coa_eval eval, coa_estimate* out);
COA_API coa_status coa_win_probability(const coa_market* market, int bidder_id, double theta, coa_eval eval,
                                       double* out);
COA_API coa_status coa_interim_payoff(const coa_market* market, int bidder_id, double theta, double* out);
/* gains must hold n_reports values. */
COA_API coa_status coa_ic_audit(const coa_market* market, int bidder_id, double true_theta, const double* reports,
                                size_t n_reports, double* gains, coa_audit_summary* out);

/* ---- ascending clock auction ---- */
COA_API void coa_auction_config_default(coa_auction_config* out);
/*
 * A prepared auction precomputes the seller-pivotal contract curves once.
 * The market must outlive the auction.
 */
COA_API coa_status coa_auction_create(const coa_market* market, const coa_auction_config* cfg, coa_auction** out);
COA_API void coa_auction_destroy(coa_auction* auction);
/* exit_prices and exit_order may be NULL; otherwise they must hold n values (ascending). */
COA_API coa_status coa_auction_run(const coa_auction* auction, const double* types, size_t n, uint64_t seed,
                                   coa_eval eval, coa_auction_outcome* out, double* exit_prices, int* exit_order);
/* One-shot forms that prepare a fresh auction per call. */
COA_API coa_status coa_run_auction(const coa_market* market, const double* types, size_t n,
                                   const coa_auction_config* cfg, uint64_t seed, coa_eval eval,
                                   coa_auction_outcome* out, double* exit_prices, int* exit_order);
COA_API coa_status coa_deviation_probe(const coa_market* market, const double* types, size_t n, int deviant_id,
                                       double exit_price, const coa_auction_config* cfg, coa_eval eval,
                                       double* delta);
COA_API coa_status coa_revenue_equivalence(const coa_market* market, const coa_auction_config* cfg, int64_t n_draws,
                                           uint64_t seed, coa_eval eval, coa_equivalence* out);
/*
 * Paired sweep over epsilons, reported in decreasing epsilon order. reports
 * must hold m entries and gap_drops m - 1 entries (may be NULL when m == 1).
 */
COA_API coa_status coa_epsilon_sweep(const coa_market* market, const double* epsilons, size_t m, int64_t n_draws,
                                     uint64_t seed, coa_eval eval, coa_equivalence* reports, coa_estimate* gap_drops,
                                     int* monotone, double* worst_margin_se);

#ifdef __cplusplus
}
#endif

#endif /* COAUCTION_H */
