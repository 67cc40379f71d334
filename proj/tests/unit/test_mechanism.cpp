// SPDX-License-Identifier: MIT
#include "coauction/error.hpp"
#include "coauction/mechanism.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace coauction;

namespace {

const CollaborationMode kWp = CollaborationMode::winner_pivotal();
const CollaborationMode kSp = CollaborationMode::seller_pivotal();
const CollaborationMode kEs = CollaborationMode::effort_substitution();

Market iid_market(const CollaborationMode& mode, const TypeDistribution& d, int n, bool curves = false) {
    std::vector<BidderProfile> b;
    for (int i = 0; i < n; ++i) b.push_back({i + 1, d});
    return Market(std::move(b), mode, {}, MarketOptions{curves});
}

} // namespace

TEST_CASE("effort examples") {
    const Efforts wp = efforts(kWp, 0.5, 1.0, {1.0, true});
    CHECK(std::abs(wp.seller - 1.0 / 3.0) <= 1e-15);
    CHECK(std::abs(wp.winner - 2.0 / 3.0) <= 1e-15);
    const Efforts sp = efforts(kSp, 1.0, 0.7, {0.7, true});
    CHECK(sp.seller == doctest::Approx(0.7));
    CHECK(sp.winner == 0.0);
    const Efforts none = efforts(kWp, 0.0, 0.6, {0.6, true});
    CHECK(none.seller == 0.0);
    CHECK(none.winner == doctest::Approx(0.6));
    CHECK_THROWS_AS(efforts(kWp, 1.2, 0.5, {0.5, true}), Error);
}

TEST_CASE("efforts and payoffs match iterated best responses") {
    for (const CollaborationMode& m : {kWp, kSp, kEs, CollaborationMode::nested(0.35)})
        for (double a : {0.1, 0.5, 0.9})
            for (double theta : {0.3, 0.8})
                for (double belief : {0.3, 0.55, 0.8}) {
                    INFO(m.name() << " alpha=" << a << " theta=" << theta << " belief=" << belief);
                    const Efforts e = efforts(m, a, theta, {belief, true});
                    const oracle::EffortPair o = oracle::deviation_efforts(m, a, theta, belief);
                    CHECK(std::abs(e.seller - o.seller) <= 1e-12);
                    CHECK(std::abs(e.winner - o.winner) <= 1e-12);
                    CHECK(std::abs(winner_gross_payoff(m, a, theta, belief) - oracle::winner_payoff(m, a, theta, belief)) <=
                          1e-12);
                }
}

TEST_CASE("winner cash payment") {
    const auto u = TypeDistribution::uniform(0.0, 1.0);
    const double a = alpha_wp(u, 0.8).alpha;
    CHECK(std::abs(winner_cash_payment(kWp, u, 0.8, 0.8) - winner_gross_payoff(kWp, a, 0.8, 0.8)) <= 1e-15);

    const auto explicit_term = [](double alpha, double tau) {
        const double es = (1 - alpha) * alpha * tau / (1 - (1 - alpha) * alpha);
        return std::pair{0.5 * (1 - alpha) * (1 - alpha) * (tau + es) * (tau + es), (1 - alpha) * (1 - alpha) * (tau + es)};
    };
    const double first = explicit_term(a, 0.8).first;
    const double riemann = oracle::midpoint_sum(
        [&](double tau) { return explicit_term(alpha_wp(u, tau).alpha, tau).second; }, 0.5, 0.8, 1000000);
    CHECK(std::abs(winner_cash_payment(kWp, u, 0.8, 0.5) - (first - riemann)) <= 1e-6);

    // Full extraction in the pooling region.
    CHECK(std::abs(winner_cash_payment(kSp, u, 0.45, 0.2)) <= 1e-15);
    CHECK(winner_cash_payment(kSp, u, 0.9, 0.6) >= 0.0);
    CHECK_THROWS_AS(winner_cash_payment(kWp, u, 0.5, 0.6), Error);
}

TEST_CASE("allocation by virtual surplus") {
    const auto u = TypeDistribution::uniform(0.0, 1.0);
    const Market m = iid_market(kWp, u, 2);
    CHECK(allocate(m, {0.8, 0.3}, 1) == 1);
    CHECK(allocate(m, {0.2, 0.3}, 1) == 2);

    const Market het({{1, u}, {2, TypeDistribution::uniform(0.0, 2.0)}}, kWp, {}, MarketOptions{false});
    const auto grid_phi = [](const TypeDistribution& d, double t) {
        return psi(kWp, d, oracle::dense_argmax([&](double a) { return psi(kWp, d, a, t); }, 0.0, 1.0, 100001), t);
    };
    const int expected = grid_phi(u, 0.9) > grid_phi(TypeDistribution::uniform(0.0, 2.0), 0.9) ? 1 : 2;
    CHECK(allocate(het, {0.9, 0.9}, 7) == expected);
    CHECK(expected == 1);
}

TEST_CASE("exact ties are split evenly") {
    // Same law under two parameterizations, so the surpluses tie bit for bit.
    const Market m({{1, TypeDistribution::uniform(0.0, 1.0)}, {2, TypeDistribution::power(1.0, 0.0, 1.0)}}, kWp, {},
                   MarketOptions{false});
    CHECK_FALSE(m.identical_bidders());
    REQUIRE(m.phi(0, 0.6, Evaluation::Exact) == m.phi(1, 0.6, Evaluation::Exact));
    const int n = 10000;
    int first = 0;
    for (int s = 0; s < n; ++s)
        if (allocate(m, {0.6, 0.6}, static_cast<std::uint64_t>(s)) == 1) ++first;
    const double sigma = std::sqrt(0.25 / n);
    CHECK(std::abs(static_cast<double>(first) / n - 0.5) <= 3 * sigma);
}

TEST_CASE("direct mechanism outcome invariants") {
    for (const auto& d : oracle::default_quartet())
        for (const CollaborationMode& mode : {kWp, kSp, kEs, CollaborationMode::nested(0.5)}) {
            INFO(d.describe() << ' ' << mode.name());
            const Market m = iid_market(mode, d, 3);
            const std::vector<double> types{0.35, 0.82, 0.6};
            const DirectOutcome o = run_direct(m, types, 11);
            REQUIRE(o.winner.has_value());
            CHECK(*o.winner == 2);
            CHECK(o.revealed_type == 0.82);
            CHECK(o.alpha >= 0.0);
            CHECK(o.alpha <= 1.0);
            CHECK(std::abs(o.pivot_type - 0.6) <= 1e-9);
            const double v = oracle::value(mode, 0.82, o.effort_seller, o.effort_winner);
            CHECK(std::abs(o.realized_value - v) <= 1e-12);
            CHECK(std::abs(o.seller_revenue - (o.cash_winner + o.alpha * v - 0.5 * o.effort_seller * o.effort_seller)) <=
                  1e-12);
            CHECK(std::abs(o.bidder_payoffs[1] -
                           (-o.cash_winner + (1 - o.alpha) * v - 0.5 * o.effort_winner * o.effort_winner)) <= 1e-12);
            CHECK(o.cash_winner >= 0.0);
            CHECK(o.bidder_payoffs[1] >= -1e-12);
            for (double c : o.cash_losers) CHECK(c == 0.0);
            CHECK(std::abs(o.cash_winner - winner_cash_payment(mode, d, 0.82, o.pivot_type)) <= 1e-9);
        }
}

TEST_CASE("single bidder and pooling-region outcomes") {
    const auto u = TypeDistribution::uniform(0.0, 1.0);
    const DirectOutcome single = run_direct(iid_market(kWp, u, 1), {0.8}, 3);
    CHECK(single.pivot_type == 0.0);
    CHECK(std::abs(single.bidder_payoffs[0] - rent_integral(kWp, u, 0.0, 0.8)) <= 1e-12);

    const DirectOutcome pooled = run_direct(iid_market(kSp, u, 2), {0.45, 0.1}, 3);
    CHECK(pooled.alpha == 1.0);
    CHECK(std::abs((1 - pooled.alpha) * pooled.realized_value) == 0.0);
    CHECK(std::abs(pooled.bidder_payoffs[0]) <= 1e-15);

    const Market two = iid_market(kWp, u, 2);
    const DirectOutcome a = run_direct(two, {0.7, 0.7}, 0);
    const DirectOutcome b = run_direct(two, {0.7, 0.7}, 1);
    CHECK(a.seller_revenue == b.seller_revenue);
    CHECK(a.pivot_type == 0.7);
}

TEST_CASE("expected maximum surplus by quadrature") {
    const auto u = TypeDistribution::uniform(0.0, 1.0);
    const double single = expected_max_phi(kWp, {u});
    CHECK(std::abs(single - oracle::midpoint_sum([&](double t) { return phi(kWp, u, t); }, 0.0, 1.0, 20000)) <= 1e-8);
    CHECK(expected_max_phi(kSp, {u, u}) > expected_max_phi(kWp, {u, u}));

    // Heterogeneous formula reduces to the iid one on a split parameterization.
    const double iid = expected_max_phi(kSp, {u, u});
    const double split = expected_max_phi(kSp, {u, TypeDistribution::power(1.0, 0.0, 1.0)});
    CHECK(std::abs(iid - split) <= 1e-8);

    // Mass piled against the top type drives revenue towards the top surplus.
    double prev_gap = 1.0;
    for (double k : {10.0, 50.0, 100.0}) {
        const auto top = TypeDistribution::power(k, 0.0, 1.0);
        const double gap = phi(kWp, top, 1.0) - expected_max_phi(kWp, {top});
        CHECK(gap > 0.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.04);
}

TEST_CASE("interim payoff equals the average of realized payoffs") {
    const auto u = TypeDistribution::uniform(0.0, 1.0);
    const auto e = TypeDistribution::truncated_exponential(1.0, 0.0, 1.0);
    for (const CollaborationMode& mode : {kWp, kSp, kEs}) {
        const Market m({{1, u}, {2, e}}, mode, {}, MarketOptions{false});
        for (int k = 1; k <= 20; ++k) {
            const double theta = k / 20.0;
            INFO(mode.name() << " theta=" << theta);
            const auto realized = [&](double rival) {
                return run_direct(m, {theta, rival}, 5).bidder_payoffs[0] * e.pdf(rival);
            };
            const double rival_cut = m.pivot_type(1, m.phi(0, theta, Evaluation::Exact), Evaluation::Exact);
            const double simulated = integrate(realized, 0.0, rival_cut) + integrate(realized, rival_cut, 1.0);
            CHECK(std::abs(simulated - interim_payoff(m, 0, theta)) <= 1e-7);
        }
    }
}

TEST_CASE("incentive audit") {
    const auto u = TypeDistribution::uniform(0.0, 1.0);
    std::vector<double> grid;
    for (int k = 0; k <= 100; ++k) grid.push_back(k / 100.0);
    for (const CollaborationMode& mode : {kWp, kSp}) {
        const Market m = iid_market(mode, u, 2);
        const AuditReport r = ic_audit(m, 1, 0.6, grid);
        CHECK(r.max_gain <= 1e-9);
        CHECK(r.gains[60] == 0.0);
        CHECK(std::abs(ic_audit(m, 1, 0.0, {0.0}).truthful_payoff) <= 1e-12);

        // Deviation payoff integrated over the rival's type, independent of
        // the netted envelope form used by the audit.
        const auto deviation = [&](double report) {
            const double a = alpha_star(mode, u, report).alpha;
            return integrate(
                [&](double rival) {
                    return oracle::winner_payoff(mode, a, 0.6, report) - winner_cash_payment(mode, u, report, rival);
                },
                0.0, report);
        };
        const double truthful = deviation(0.6);
        CHECK(std::abs(truthful - r.truthful_payoff) <= 1e-8);
        for (int k : {20, 45, 75, 95}) CHECK(std::abs(deviation(k / 100.0) - truthful - r.gains[k]) <= 1e-8);
    }
}
