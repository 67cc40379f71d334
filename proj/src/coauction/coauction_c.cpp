// SPDX-License-Identifier: MIT
// Exception-safe C shim over the C++ core.
#include "coauction/coauction.h"

#include "coauction/auction.hpp"
#include "coauction/distribution.hpp"
#include "coauction/error.hpp"
#include "coauction/mechanism.hpp"
#include "coauction/sharing.hpp"
#include "coauction/surplus.hpp"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

struct coa_dist {
    coauction::TypeDistribution dist;
};

struct coa_market {
    std::unique_ptr<coauction::Market> market;
};

struct coa_auction {
    std::unique_ptr<coauction::ClockAuction> auction;
};

namespace {

using namespace coauction;

thread_local std::string g_last_error;

coa_status set_error(coa_status status, const char* what) {
    g_last_error = what;
    return status;
}

coa_status to_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return COA_ERR_INVALID_ARGUMENT;
    case ErrorCode::Domain: return COA_ERR_DOMAIN;
    case ErrorCode::DegenerateDensity: return COA_ERR_DEGENERATE_DENSITY;
    case ErrorCode::Bracket: return COA_ERR_BRACKET;
    case ErrorCode::Convergence: return COA_ERR_CONVERGENCE;
    case ErrorCode::ConditionViolated: return COA_ERR_CONDITION_VIOLATED;
    case ErrorCode::Internal: return COA_ERR_INTERNAL;
    }
    return COA_ERR_INTERNAL;
}

template <class F>
coa_status guarded(F&& body) noexcept {
    try {
        body();
        return COA_OK;
    } catch (const Error& e) {
        return set_error(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(COA_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(COA_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(COA_ERR_INTERNAL, "unknown exception");
    }
}

void need(const void* p, const char* what) {
    if (p == nullptr) fail(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

CollaborationMode to_mode(coa_mode m) {
    switch (m.kind) {
    case COA_WINNER_PIVOTAL: return CollaborationMode::winner_pivotal();
    case COA_SELLER_PIVOTAL: return CollaborationMode::seller_pivotal();
    case COA_EFFORT_SUBSTITUTION: return CollaborationMode::effort_substitution();
    case COA_NESTED: return CollaborationMode::nested(m.zeta);
    }
    fail(ErrorCode::InvalidArgument, "unknown collaboration mode");
}

SolverConfig to_solver(const coa_solver_config* c) {
    SolverConfig s;
    if (c == nullptr) return s;
    s.root.abs_tol = c->root_abs_tol;
    s.root.max_iter = c->root_max_iter;
    s.quad.rel_tol = c->quad_rel_tol;
    s.quad.max_depth = c->quad_max_depth;
    s.nested_grid = c->nested_grid;
    require(s.root.abs_tol > 0.0 && s.root.max_iter > 0, ErrorCode::InvalidArgument, "bad root-finder settings");
    require(s.quad.rel_tol > 0.0 && s.quad.max_depth > 0, ErrorCode::InvalidArgument, "bad quadrature settings");
    require(s.nested_grid >= 3, ErrorCode::InvalidArgument, "nested grid needs at least 3 points");
    return s;
}

AuctionConfig to_auction(const coa_auction_config* c) {
    AuctionConfig a;
    if (c == nullptr) return a;
    a.epsilon = c->epsilon;
    a.clock_resolution = c->clock_resolution;
    return a;
}

Evaluation to_eval(coa_eval e) { return e == COA_EVAL_CACHED ? Evaluation::Cached : Evaluation::Exact; }

coa_branch to_branch(Branch b) {
    switch (b) {
    case Branch::Interior: return COA_BRANCH_INTERIOR;
    case Branch::CornerOne: return COA_BRANCH_CORNER_ONE;
    case Branch::CornerZero: return COA_BRANCH_CORNER_ZERO;
    case Branch::LimitAtZeroType: return COA_BRANCH_LIMIT_AT_ZERO;
    }
    return COA_BRANCH_INTERIOR;
}

coa_estimate to_estimate(const MeanEstimate& m) { return {m.mean, m.std_error, m.count}; }

coa_equivalence to_equivalence(const EquivalenceReport& r) {
    return {r.epsilon, to_estimate(r.direct), to_estimate(r.auction), to_estimate(r.difference), r.max_abs_difference,
            r.clamped_draws};
}

const Market& market_of(const coa_market* m) {
    need(m, "market");
    return *m->market;
}

std::vector<double> types_of(const Market& market, const double* types, std::size_t n) {
    need(types, "types");
    require(n == market.size(), ErrorCode::InvalidArgument, "one type per bidder is required");
    return {types, types + n};
}

void fill_outcome(const Market& m, const AuctionTranscript& t, coa_auction_outcome* out, double* exit_prices,
                  int* exit_order) {
    out->winner_id = t.winner_id.value_or(-1);
    out->clock_start = t.clock_start;
    out->price_runner_up = t.price_runner_up;
    out->price_winner = t.price_winner;
    out->contract_alpha = t.contract_alpha;
    out->alpha_clamped = t.alpha_clamped ? 1 : 0;
    out->contract_cash = t.contract_cash;
    out->posterior_type = t.posterior_type;
    out->pivot_type = t.pivot_type;
    out->effort_seller = t.efforts.seller;
    out->effort_winner = t.efforts.winner;
    out->realized_value = t.realized_value;
    out->seller_revenue = t.seller_revenue;
    out->winner_payoff = t.winner_id ? t.bidder_payoffs.at(m.index_of(*t.winner_id)) : 0.0;
    if (exit_prices != nullptr) std::copy(t.exit_prices.begin(), t.exit_prices.end(), exit_prices);
    if (exit_order != nullptr) std::copy(t.exit_order.begin(), t.exit_order.end(), exit_order);
}

} // namespace

extern "C" {

const char* coa_version(void) { return COAUCTION_VERSION_STRING; }

const char* coa_last_error(void) { return g_last_error.c_str(); }

const char* coa_status_name(coa_status status) {
    switch (status) {
    case COA_OK: return "ok";
    case COA_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case COA_ERR_DOMAIN: return "domain";
    case COA_ERR_DEGENERATE_DENSITY: return "degenerate_density";
    case COA_ERR_BRACKET: return "bracket";
    case COA_ERR_CONVERGENCE: return "convergence";
    case COA_ERR_CONDITION_VIOLATED: return "condition_violated";
    case COA_ERR_INTERNAL: return "internal";
    case COA_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    }
    return "unknown";
}

void coa_solver_config_default(coa_solver_config* out) {
    if (out == nullptr) return;
    const SolverConfig s;
    *out = {s.root.abs_tol, s.root.max_iter, s.quad.rel_tol, s.quad.max_depth, s.nested_grid};
}

const char* coa_branch_name(coa_branch branch) {
    switch (branch) {
    case COA_BRANCH_INTERIOR: return branch_name(Branch::Interior);
    case COA_BRANCH_CORNER_ONE: return branch_name(Branch::CornerOne);
    case COA_BRANCH_CORNER_ZERO: return branch_name(Branch::CornerZero);
    case COA_BRANCH_LIMIT_AT_ZERO: return branch_name(Branch::LimitAtZeroType);
    }
    return "unknown";
}

coa_status coa_dist_create(coa_family family, double p1, double p2, double lo, double hi, coa_dist** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        auto make = [&]() -> TypeDistribution {
            switch (family) {
            case COA_UNIFORM: return TypeDistribution::uniform(lo, hi);
            case COA_TRUNCATED_EXPONENTIAL: return TypeDistribution::truncated_exponential(p1, lo, hi);
            case COA_TRUNCATED_NORMAL: return TypeDistribution::truncated_normal(p1, p2, lo, hi);
            case COA_POWER: return TypeDistribution::power(p1, lo, hi);
            }
            fail(ErrorCode::InvalidArgument, "unknown distribution family");
        };
        *out = new coa_dist{make()};
    });
}

void coa_dist_destroy(coa_dist* dist) { delete dist; }

coa_status coa_dist_support(const coa_dist* dist, double* lo, double* hi) {
    return guarded([&] {
        need(dist, "dist");
        if (lo != nullptr) *lo = dist->dist.lo();
        if (hi != nullptr) *hi = dist->dist.hi();
    });
}

coa_status coa_dist_cdf(const coa_dist* dist, double theta, double* out) {
    return guarded([&] {
        need(dist, "dist");
        need(out, "out");
        *out = dist->dist.cdf(theta);
    });
}

coa_status coa_dist_pdf(const coa_dist* dist, double theta, double* out) {
    return guarded([&] {
        need(dist, "dist");
        need(out, "out");
        *out = dist->dist.pdf(theta);
    });
}

coa_status coa_dist_inverse_hazard(const coa_dist* dist, double theta, double* out) {
    return guarded([&] {
        need(dist, "dist");
        need(out, "out");
        *out = dist->dist.inverse_hazard(theta);
    });
}

coa_status coa_dist_quantile(const coa_dist* dist, double u, double* out) {
    return guarded([&] {
        need(dist, "dist");
        need(out, "out");
        *out = dist->dist.quantile(u);
    });
}

coa_status coa_dist_validate(const coa_dist* dist, coa_check* checks, size_t capacity, size_t* count, int* all_pass) {
    return guarded([&] {
        need(dist, "dist");
        const ValidationReport rep = validate(dist->dist);
        if (count != nullptr) *count = rep.checks.size();
        if (all_pass != nullptr) *all_pass = rep.all_pass() ? 1 : 0;
        if (checks == nullptr) return;
        const std::size_t k = std::min(capacity, rep.checks.size());
        for (std::size_t i = 0; i < k; ++i) {
            coa_check& c = checks[i];
            std::memset(c.name, 0, sizeof c.name);
            std::strncpy(c.name, rep.checks[i].name.c_str(), sizeof c.name - 1);
            c.pass = rep.checks[i].pass ? 1 : 0;
            c.worst_violation = rep.checks[i].worst_violation;
            c.where = rep.checks[i].where;
        }
    });
}

coa_status coa_dist_describe(const coa_dist* dist, char* buffer, size_t capacity) {
    coa_status status = COA_OK;
    const coa_status guard = guarded([&] {
        need(dist, "dist");
        need(buffer, "buffer");
        const std::string s = dist->dist.describe();
        if (s.size() + 1 > capacity) {
            status = set_error(COA_ERR_BUFFER_TOO_SMALL, "description does not fit the buffer");
            return;
        }
        std::memcpy(buffer, s.c_str(), s.size() + 1);
    });
    return guard != COA_OK ? guard : status;
}

coa_status coa_alpha_star(coa_mode mode, const coa_dist* dist, double theta, const coa_solver_config* cfg,
                          coa_sharing* out) {
    return guarded([&] {
        need(dist, "dist");
        need(out, "out");
        const SharingSolution s = alpha_star(to_mode(mode), dist->dist, theta, to_solver(cfg));
        *out = {s.alpha, to_branch(s.branch), s.residual};
    });
}

coa_status coa_theta_c(const coa_dist* dist, const coa_solver_config* cfg, double* out) {
    return guarded([&] {
        need(dist, "dist");
        need(out, "out");
        *out = theta_c(dist->dist, to_solver(cfg).root);
    });
}

coa_status coa_psi(coa_mode mode, const coa_dist* dist, double alpha, double theta, double* out) {
    return guarded([&] {
        need(dist, "dist");
        need(out, "out");
        *out = psi(to_mode(mode), dist->dist, alpha, theta);
    });
}

coa_status coa_phi(coa_mode mode, const coa_dist* dist, double theta, const coa_solver_config* cfg, double* out) {
    return guarded([&] {
        need(dist, "dist");
        need(out, "out");
        *out = phi(to_mode(mode), dist->dist, theta, to_solver(cfg));
    });
}

coa_status coa_phi_inverse(coa_mode mode, const coa_dist* dist, double p, const coa_solver_config* cfg,
                           double* out) {
    return guarded([&] {
        need(dist, "dist");
        need(out, "out");
        *out = phi_inverse(to_mode(mode), dist->dist, p, to_solver(cfg));
    });
}

coa_status coa_nested_coefficients(double alpha, double zeta, double* a, double* b, double* h) {
    return guarded([&] {
        require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::Domain, "alpha must lie in [0, 1]");
        require(zeta >= 0.0 && zeta <= 1.0, ErrorCode::Domain, "zeta must lie in [0, 1]");
        const NestedCoefficients c = nested_coefficients(alpha, zeta);
        if (a != nullptr) *a = c.a;
        if (b != nullptr) *b = c.b;
        if (h != nullptr) *h = c.h;
    });
}

coa_status coa_check_conditions(const coa_dist* dist, double theta, double zeta, int grid_n, coa_conditions* out) {
    return guarded([&] {
        need(dist, "dist");
        need(out, "out");
        const ConditionReport r = check_prop7_conditions(dist->dist, theta, zeta, grid_n);
        *out = {r.alpha, to_branch(r.branch), r.d_a, r.d_h, r.applicable ? 1 : 0, r.satisfied ? 1 : 0};
    });
}

coa_status coa_efforts(coa_mode mode, double alpha, double own_type, double posterior_mean, double* effort_seller,
                       double* effort_winner) {
    return guarded([&] {
        require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::Domain, "alpha must lie in [0, 1]");
        const Efforts e = efforts(to_mode(mode), alpha, own_type, {posterior_mean, true});
        if (effort_seller != nullptr) *effort_seller = e.seller;
        if (effort_winner != nullptr) *effort_winner = e.winner;
    });
}

coa_status coa_winner_cash_payment(coa_mode mode, const coa_dist* dist, double theta_win, double theta_pivot,
                                   const coa_solver_config* cfg, double* out) {
    return guarded([&] {
        need(dist, "dist");
        need(out, "out");
        *out = winner_cash_payment(to_mode(mode), dist->dist, theta_win, theta_pivot, to_solver(cfg));
    });
}

coa_status coa_expected_max_phi(coa_mode mode, const coa_dist* const* dists, size_t n, const coa_solver_config* cfg,
                                double* out) {
    return guarded([&] {
        need(dists, "dists");
        need(out, "out");
        require(n >= 1, ErrorCode::InvalidArgument, "at least one distribution is required");
        std::vector<TypeDistribution> v;
        v.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            need(dists[i], "dists[i]");
            v.push_back(dists[i]->dist);
        }
        *out = expected_max_phi(to_mode(mode), v, to_solver(cfg));
    });
}

coa_status coa_market_create(const int* bidder_ids, const coa_dist* const* dists, size_t n, coa_mode mode,
                             const coa_solver_config* cfg, int build_curves, coa_market** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        need(bidder_ids, "bidder_ids");
        need(dists, "dists");
        std::vector<BidderProfile> bidders;
        bidders.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            need(dists[i], "dists[i]");
            bidders.push_back({bidder_ids[i], dists[i]->dist});
        }
        MarketOptions options;
        options.build_curves = build_curves != 0;
        auto handle = std::make_unique<coa_market>();
        handle->market = std::make_unique<Market>(std::move(bidders), to_mode(mode), to_solver(cfg), options);
        *out = handle.release();
    });
}

void coa_market_destroy(coa_market* market) { delete market; }

size_t coa_market_size(const coa_market* market) { return market == nullptr ? 0 : market->market->size(); }

coa_status coa_market_phi(const coa_market* market, size_t bidder_index, double theta, coa_eval eval, double* out) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(out, "out");
        require(bidder_index < m.size(), ErrorCode::InvalidArgument, "bidder index out of range");
        *out = m.phi(bidder_index, theta, to_eval(eval));
    });
}

coa_status coa_market_sample_types(const coa_market* market, uint64_t seed, uint64_t draw, double* types, size_t n) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(types, "types");
        require(n == m.size(), ErrorCode::InvalidArgument, "one type per bidder is required");
        const std::vector<double> t = m.draw_types(CounterRng(seed), draw);
        std::copy(t.begin(), t.end(), types);
    });
}

uint64_t coa_draw_seed(uint64_t seed, uint64_t draw) { return CounterRng(seed).bits(0, draw); }

coa_status coa_market_expected_max_phi(const coa_market* market, coa_eval eval, double* out) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(out, "out");
        *out = expected_max_phi(m, to_eval(eval));
    });
}

coa_status coa_run_direct(const coa_market* market, const double* types, size_t n, uint64_t seed, coa_eval eval,
                          coa_direct_outcome* out) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(out, "out");
        const DirectOutcome o = run_direct(m, types_of(m, types, n), seed, to_eval(eval));
        out->winner_id = o.winner.value_or(-1);
        out->alpha = o.alpha;
        out->cash_winner = o.cash_winner;
        out->revealed_type = o.revealed_type;
        out->pivot_type = o.pivot_type;
        out->effort_seller = o.effort_seller;
        out->effort_winner = o.effort_winner;
        out->realized_value = o.realized_value;
        out->seller_revenue = o.seller_revenue;
        out->winner_payoff = o.winner ? o.bidder_payoffs.at(m.index_of(*o.winner)) : 0.0;
    });
}

coa_status coa_simulate_direct_revenue(const coa_market* market, int64_t n_draws, uint64_t seed, coa_eval eval,
                                       coa_estimate* out) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(out, "out");
        *out = to_estimate(simulate_direct_revenue(m, {n_draws, seed}, to_eval(eval)));
    });
}

coa_status coa_win_probability(const coa_market* market, int bidder_id, double theta, coa_eval eval, double* out) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(out, "out");
        *out = win_probability(m, m.index_of(bidder_id), theta, to_eval(eval));
    });
}

coa_status coa_interim_payoff(const coa_market* market, int bidder_id, double theta, double* out) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(out, "out");
        *out = interim_payoff(m, m.index_of(bidder_id), theta);
    });
}

coa_status coa_ic_audit(const coa_market* market, int bidder_id, double true_theta, const double* reports,
                        size_t n_reports, double* gains, coa_audit_summary* out) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(reports, "reports");
        const AuditReport r = ic_audit(m, bidder_id, true_theta, {reports, reports + n_reports});
        if (gains != nullptr) std::copy(r.gains.begin(), r.gains.end(), gains);
        if (out != nullptr) *out = {r.truthful_payoff, r.max_gain, r.argmax_report};
    });
}

void coa_auction_config_default(coa_auction_config* out) {
    if (out == nullptr) return;
    const AuctionConfig a;
    *out = {a.epsilon, a.clock_resolution};
}

coa_status coa_auction_create(const coa_market* market, const coa_auction_config* cfg, coa_auction** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        const Market& m = market_of(market);
        auto handle = std::make_unique<coa_auction>();
        handle->auction = std::make_unique<ClockAuction>(m, to_auction(cfg));
        *out = handle.release();
    });
}

void coa_auction_destroy(coa_auction* auction) { delete auction; }

coa_status coa_auction_run(const coa_auction* auction, const double* types, size_t n, uint64_t seed, coa_eval eval,
                           coa_auction_outcome* out, double* exit_prices, int* exit_order) {
    return guarded([&] {
        need(auction, "auction");
        need(out, "out");
        const Market& m = auction->auction->market();
        fill_outcome(m, auction->auction->run(types_of(m, types, n), seed, to_eval(eval)), out, exit_prices,
                     exit_order);
    });
}

coa_status coa_run_auction(const coa_market* market, const double* types, size_t n, const coa_auction_config* cfg,
                           uint64_t seed, coa_eval eval, coa_auction_outcome* out, double* exit_prices,
                           int* exit_order) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(out, "out");
        fill_outcome(m, run_auction(m, types_of(m, types, n), to_auction(cfg), seed, to_eval(eval)), out, exit_prices,
                     exit_order);
    });
}

coa_status coa_deviation_probe(const coa_market* market, const double* types, size_t n, int deviant_id,
                               double exit_price, const coa_auction_config* cfg, coa_eval eval, double* delta) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(delta, "delta");
        *delta = deviation_probe(m, types_of(m, types, n), deviant_id, exit_price, to_auction(cfg), to_eval(eval));
    });
}

coa_status coa_revenue_equivalence(const coa_market* market, const coa_auction_config* cfg, int64_t n_draws,
                                   uint64_t seed, coa_eval eval, coa_equivalence* out) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(out, "out");
        *out = to_equivalence(revenue_equivalence_check(m, to_auction(cfg), {n_draws, seed}, to_eval(eval)));
    });
}

coa_status coa_epsilon_sweep(const coa_market* market, const double* epsilons, size_t m_eps, int64_t n_draws,
                             uint64_t seed, coa_eval eval, coa_equivalence* reports, coa_estimate* gap_drops,
                             int* monotone, double* worst_margin_se) {
    return guarded([&] {
        const Market& m = market_of(market);
        need(epsilons, "epsilons");
        need(reports, "reports");
        if (m_eps > 1) need(gap_drops, "gap_drops");
        const EpsilonSweep s = sweep_epsilon(m, {epsilons, epsilons + m_eps}, {n_draws, seed}, to_eval(eval));
        for (std::size_t k = 0; k < s.reports.size(); ++k) reports[k] = to_equivalence(s.reports[k]);
        for (std::size_t k = 0; k < s.gap_drops.size(); ++k) gap_drops[k] = to_estimate(s.gap_drops[k]);
        if (monotone != nullptr) *monotone = s.monotone ? 1 : 0;
        if (worst_margin_se != nullptr) *worst_margin_se = s.worst_margin_se;
    });
}

} // extern "C"
