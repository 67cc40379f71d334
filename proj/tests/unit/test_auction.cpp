// SPDX-License-Identifier: MIT
#include "coauction/auction.hpp"
#include "coauction/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace coauction;

namespace {

const CollaborationMode kWp = CollaborationMode::winner_pivotal();
const CollaborationMode kSp = CollaborationMode::seller_pivotal();

Market pair_market(const CollaborationMode& mode, bool curves = true) {
    const auto u = TypeDistribution::uniform(0.0, 1.0);
    return Market({{1, u}, {2, u}}, mode, {}, MarketOptions{curves});
}

} // namespace

TEST_CASE("winner-pivotal clock reproduces the direct mechanism") {
    const Market m = pair_market(kWp);
    const AuctionTranscript t = run_auction(m, {0.9, 0.4}, {}, 3);
    const DirectOutcome d = run_direct(m, {0.9, 0.4}, 3);
    REQUIRE(t.winner_id.has_value());
    CHECK(*t.winner_id == 1);
    CHECK(t.exit_order == std::vector<int>{2, 1});
    CHECK(t.price_runner_up == m.phi(1, 0.4, Evaluation::Exact));
    CHECK(t.price_winner == m.phi(0, 0.9, Evaluation::Exact));
    CHECK(t.exit_prices.front() <= t.exit_prices.back());
    CHECK(std::abs(t.posterior_type - 0.9) <= 1e-12);
    CHECK(std::abs(t.contract_alpha - d.alpha) <= 1e-12);
    CHECK(std::abs(t.contract_cash - d.cash_winner) <= 1e-8);
    CHECK(std::abs(t.seller_revenue - d.seller_revenue) <= 1e-8);
    CHECK(std::abs(t.bidder_payoffs[0] - d.bidder_payoffs[0]) <= 1e-8);
    CHECK(t.bidder_payoffs[1] == 0.0);
    CHECK(t.exit_ticks[1] == static_cast<std::int64_t>(std::floor(t.price_winner / 1e-6)));
}

TEST_CASE("clock ties") {
    const Market m = pair_market(kWp);
    const AuctionTranscript a = run_auction(m, {0.7, 0.7}, {}, 0);
    const AuctionTranscript b = run_auction(m, {0.7, 0.7}, {}, 1);
    CHECK(a.seller_revenue == b.seller_revenue);
    CHECK(a.pivot_type == 0.7);
    int first = 0;
    for (std::uint64_t s = 0; s < 4000; ++s)
        if (run_auction(m, {0.7, 0.7}, {}, s).winner_id == 1) ++first;
    CHECK(std::abs(first / 4000.0 - 0.5) <= 3 * std::sqrt(0.25 / 4000));
}

TEST_CASE("seller-pivotal clock leaves epsilon with the winner") {
    const Market m = pair_market(kSp);
    const auto u = TypeDistribution::uniform(0.0, 1.0);
    const AuctionTranscript t = run_auction(m, {0.9, 0.4}, {1e-3, 1e-6}, 3);
    CHECK(std::abs(t.contract_alpha - (alpha_sp(u, 0.9).alpha - 1e-3)) <= 1e-12);
    CHECK_FALSE(t.alpha_clamped);
    CHECK(std::abs(t.pivot_type - 0.4) <= 1e-12);
    const double rent = rent_integral(kSp, u, 0.4, 0.9, 1e-3);
    CHECK(std::abs(t.contract_cash - (winner_gross_payoff(kSp, t.contract_alpha, 0.9, 0.9) - rent)) <= 1e-9);

    const AuctionTranscript exact = run_auction(m, {0.9, 0.4}, {1e-3, 1e-6}, 3, Evaluation::Exact);
    const AuctionTranscript cached = run_auction(m, {0.9, 0.4}, {1e-3, 1e-6}, 3, Evaluation::Cached);
    CHECK(std::abs(exact.seller_revenue - cached.seller_revenue) <= 1e-6);
}

TEST_CASE("auction configuration is validated") {
    const Market es = Market({{1, TypeDistribution::uniform(0.0, 1.0)}}, CollaborationMode::effort_substitution());
    CHECK_THROWS_AS(ClockAuction(es, {}), Error);
    const Market sp = pair_market(kSp, false);
    CHECK_THROWS_AS(ClockAuction(sp, {0.0, 1e-6}), Error);
    CHECK_THROWS_AS(ClockAuction(sp, {0.2, 1e-6}), Error);
    CHECK_NOTHROW(ClockAuction(pair_market(kWp, false), {0.0, 1e-6}));
}

TEST_CASE("single-bidder clock equals the direct mechanism") {
    const Market m({{4, TypeDistribution::truncated_normal(0.5, 0.25, 0.0, 1.0)}}, kWp);
    const CounterRng rng(9);
    for (std::uint64_t i = 0; i < 200; ++i) {
        const std::vector<double> types = m.draw_types(rng, i);
        const double direct = run_direct(m, types, i, Evaluation::Cached).seller_revenue;
        const double clock = run_auction(m, types, {}, i, Evaluation::Cached).seller_revenue;
        CHECK(std::abs(direct - clock) <= 1e-9);
    }
}

TEST_CASE("deviation probes") {
    for (const CollaborationMode& mode : {kWp, kSp}) {
        const Market m = pair_market(mode, false);
        const ClockAuction auction(m, {});
        INFO(mode.name());
        const std::vector<double> types{0.8, 0.55};
        CHECK(auction.deviation_probe(types, 0, m.phi(0, 0.8, Evaluation::Exact)) == 0.0);

        const double own = run_auction(m, types, {}, 1).bidder_payoffs[0];
        const double below = m.phi(1, 0.55, Evaluation::Exact) * 0.5;
        CHECK(std::abs(auction.deviation_probe(types, 0, below) + own) <= 1e-12);

        const double top = m.phi(0, 1.0, Evaluation::Exact);
        for (int k = 0; k <= 100; ++k) {
            const double price = m.phi(0, 0.0, Evaluation::Exact) + (1.2 * top - m.phi(0, 0.0, Evaluation::Exact)) * k / 100;
            CHECK(auction.deviation_probe(types, 0, price) <= 1e-9);
            CHECK(auction.deviation_probe(types, 1, price) <= 1e-9);
        }
        CHECK_THROWS_AS(auction.deviation_probe(types, 0, -1.0), Error);
    }
}

TEST_CASE("paired revenue comparison") {
    const Market wp = pair_market(kWp);
    const EquivalenceReport r = revenue_equivalence_check(wp, {}, {5000, 17});
    CHECK(r.max_abs_difference <= 1e-8);
    CHECK(std::abs(r.difference.mean) <= 3 * r.difference.std_error + 1e-12);
    CHECK(r.clamped_draws == 0);

    const Market sp = pair_market(kSp);
    const EpsilonSweep sweep = sweep_epsilon(sp, {1e-4, 1e-2, 1e-3}, {5000, 17});
    REQUIRE(sweep.reports.size() == 3);
    CHECK(sweep.reports[0].epsilon == 1e-2);
    CHECK(sweep.reports[2].epsilon == 1e-4);
    CHECK(sweep.monotone);
    for (const EquivalenceReport& rep : sweep.reports)
        CHECK(rep.difference.mean >= -3 * rep.difference.std_error);
}
