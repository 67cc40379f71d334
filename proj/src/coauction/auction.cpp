// SPDX-License-Identifier: MIT
#include "coauction/auction.hpp"

#include "coauction/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace coauction {

ClockAuction::ClockAuction(const Market& market, const AuctionConfig& config) : market_(market), config_(config) {
    const ModeKind kind = market.mode().kind;
    require(kind == ModeKind::WinnerPivotal || kind == ModeKind::SellerPivotal, ErrorCode::InvalidArgument,
            "the clock auction supports the winner-pivotal and seller-pivotal modes only");
    require(config.clock_resolution > 0.0, ErrorCode::InvalidArgument, "clock resolution must be positive");
    if (kind != ModeKind::SellerPivotal) return;
    require(config.epsilon > 0.0 && config.epsilon <= 0.1, ErrorCode::InvalidArgument,
            "epsilon must lie in (0, 0.1]");
    if (!market.has_curves()) return;
    shifted_.reserve(market.size());
    for (std::size_t i = 0; i < market.size(); ++i) {
        if (i > 0 && market.distribution(i).same_law(market.distribution(0))) {
            shifted_.push_back(shifted_.front());
            continue;
        }
        shifted_.emplace_back(market.mode(), market.distribution(i), market.config(), kCurveSize, config.epsilon);
    }
}

double ClockAuction::shift() const noexcept {
    return market_.mode().kind == ModeKind::SellerPivotal ? config_.epsilon : 0.0;
}

double ClockAuction::rent(std::size_t i, double a, double b, Evaluation eval) const {
    if (shift() == 0.0) return market_.rent(i, a, b, eval);
    if (eval == Evaluation::Cached) {
        require(!shifted_.empty(), ErrorCode::InvalidArgument, "market was built without surplus curves");
        return shifted_[i].rent(a, b);
    }
    return rent_integral(market_.mode(), market_.distribution(i), a, b, shift(), market_.config());
}

double ClockAuction::floor_price(std::size_t i, Evaluation eval) const {
    return market_.phi(i, market_.distribution(i).lo(), eval);
}

ClockAuction::Contract ClockAuction::contract(std::size_t i, double p_win, double p_second, Evaluation eval) const {
    const TypeDistribution& d = market_.distribution(i);
    Contract c;
    c.posterior = market_.phi_inverse(i, p_win, eval);
    c.pivot = p_second <= floor_price(i, eval) ? d.lo() : market_.phi_inverse(i, p_second, eval);
    c.pivot = std::min(c.pivot, c.posterior);
    const double raw = alpha_star(market_.mode(), d, c.posterior, market_.config()).alpha - shift();
    c.alpha = std::clamp(raw, 0.0, 1.0);
    c.clamped = c.alpha != raw;
    c.cash = winner_gross_payoff(market_.mode(), c.alpha, c.posterior, c.posterior) - rent(i, c.pivot, c.posterior, eval);
    return c;
}

double ClockAuction::winner_payoff(std::size_t i, double theta, double p_win, double p_second, Evaluation eval) const {
    const Contract c = contract(i, p_win, p_second, eval);
    return winner_gross_payoff(market_.mode(), c.alpha, theta, c.posterior) - c.cash;
}

AuctionTranscript ClockAuction::run(const std::vector<double>& types, std::uint64_t seed, Evaluation eval) const {
    const std::size_t n = market_.size();
    require(types.size() == n, ErrorCode::InvalidArgument, "one type per bidder is required");
    AuctionTranscript t;
    std::vector<double> prices(n);
    t.clock_start = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const TypeDistribution& d = market_.distribution(i);
        require(types[i] >= d.lo() && types[i] <= d.hi(), ErrorCode::Domain, "type outside its support");
        prices[i] = market_.phi(i, types[i], eval);
        t.clock_start = std::min(t.clock_start, floor_price(i, eval));
    }
    const std::size_t w = pick_highest(prices, seed);
    t.winner_id = market_.bidders()[w].bidder_id;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (a == w || b == w) return b == w && a != w;
        return prices[a] < prices[b];
    });
    for (std::size_t k : order) {
        t.exit_prices.push_back(prices[k]);
        t.exit_order.push_back(market_.bidders()[k].bidder_id);
        t.exit_ticks.push_back(static_cast<std::int64_t>(std::floor(prices[k] / config_.clock_resolution)));
    }
    t.price_winner = prices[w];
    t.price_runner_up = n == 1 ? t.clock_start : t.exit_prices[n - 2];

    const Contract c = contract(w, t.price_winner, t.price_runner_up, eval);
    t.contract_alpha = c.alpha;
    t.alpha_clamped = c.clamped;
    t.contract_cash = c.cash;
    t.posterior_type = c.posterior;
    t.pivot_type = c.pivot;
    t.efforts = efforts(market_.mode(), c.alpha, types[w], {c.posterior, true});
    t.realized_value = realized_value(market_.mode(), types[w], t.efforts);
    t.seller_revenue = c.cash + c.alpha * t.realized_value - 0.5 * t.efforts.seller * t.efforts.seller;
    t.bidder_payoffs.assign(n, 0.0);
    t.bidder_payoffs[w] = (1.0 - c.alpha) * t.realized_value - 0.5 * t.efforts.winner * t.efforts.winner - c.cash;
    return t;
}

double ClockAuction::deviation_probe(const std::vector<double>& types, std::size_t deviant, double exit_price,
                                     Evaluation eval) const {
    const std::size_t n = market_.size();
    require(types.size() == n && deviant < n, ErrorCode::InvalidArgument, "bad deviation probe arguments");
    require(exit_price >= floor_price(deviant, eval), ErrorCode::Domain, "exit price below the bidder's floor");
    double top_other = -std::numeric_limits<double>::infinity();
    std::vector<double> others;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == deviant) continue;
        others.push_back(market_.phi(j, types[j], eval));
        top_other = std::max(top_other, others.back());
    }
    double clock_start = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) clock_start = std::min(clock_start, floor_price(j, eval));

    const double theta = types[deviant];
    auto expected = [&](double price) {
        if (n == 1) return winner_payoff(deviant, theta, price, clock_start, eval);
        if (price < top_other) return 0.0;
        const double won = winner_payoff(deviant, theta, price, top_other, eval);
        if (price > top_other) return won;
        const auto tied = std::count(others.begin(), others.end(), top_other);
        return won / static_cast<double>(tied + 1);
    };
    return expected(exit_price) - expected(market_.phi(deviant, theta, eval));
}

AuctionTranscript run_auction(const Market& market, const std::vector<double>& types, const AuctionConfig& config,
                              std::uint64_t seed, Evaluation eval) {
    return ClockAuction(market, config).run(types, seed, eval);
}

double deviation_probe(const Market& market, const std::vector<double>& types, int deviant_id, double exit_price,
                       const AuctionConfig& config, Evaluation eval) {
    return ClockAuction(market, config).deviation_probe(types, market.index_of(deviant_id), exit_price, eval);
}

EquivalenceReport revenue_equivalence_check(const Market& market, const AuctionConfig& config, const McConfig& mc,
                                            Evaluation eval) {
    require(mc.n_draws >= 1, ErrorCode::InvalidArgument, "Monte Carlo needs at least one draw");
    const ClockAuction auction(market, config);
    const CounterRng rng(mc.seed);
    const auto n = static_cast<std::size_t>(mc.n_draws);
    std::vector<double> direct(n);
    std::vector<double> clock(n);
    std::vector<double> diff(n);
    EquivalenceReport rep;
    rep.epsilon = market.mode().kind == ModeKind::SellerPivotal ? config.epsilon : 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        const std::vector<double> types = market.draw_types(rng, d);
        const std::uint64_t seed = rng.bits(0, d);
        direct[d] = run_direct(market, types, seed, eval).seller_revenue;
        const AuctionTranscript t = auction.run(types, seed, eval);
        clock[d] = t.seller_revenue;
        if (t.alpha_clamped) ++rep.clamped_draws;
        diff[d] = direct[d] - clock[d];
        rep.max_abs_difference = std::max(rep.max_abs_difference, std::abs(diff[d]));
    }
    rep.direct = mean_and_se(direct);
    rep.auction = mean_and_se(clock);
    rep.difference = mean_and_se(diff);
    return rep;
}

EpsilonSweep sweep_epsilon(const Market& market, std::vector<double> epsilons, const McConfig& mc, Evaluation eval) {
    require(!epsilons.empty(), ErrorCode::InvalidArgument, "no epsilons to sweep");
    require(mc.n_draws >= 1, ErrorCode::InvalidArgument, "Monte Carlo needs at least one draw");
    std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
    std::vector<ClockAuction> auctions;
    auctions.reserve(epsilons.size());
    for (double e : epsilons) {
        AuctionConfig cfg;
        cfg.epsilon = e;
        auctions.emplace_back(market, cfg);
    }
    const CounterRng rng(mc.seed);
    const auto n = static_cast<std::size_t>(mc.n_draws);
    const std::size_t m = epsilons.size();
    std::vector<double> direct(n);
    std::vector<std::vector<double>> clock(m, std::vector<double>(n));
    std::vector<std::vector<double>> gaps(m, std::vector<double>(n));
    std::vector<std::int64_t> clamped(m, 0);
    for (std::size_t d = 0; d < n; ++d) {
        const std::vector<double> types = market.draw_types(rng, d);
        const std::uint64_t seed = rng.bits(0, d);
        direct[d] = run_direct(market, types, seed, eval).seller_revenue;
        for (std::size_t k = 0; k < m; ++k) {
            const AuctionTranscript t = auctions[k].run(types, seed, eval);
            clock[k][d] = t.seller_revenue;
            gaps[k][d] = direct[d] - t.seller_revenue;
            if (t.alpha_clamped) ++clamped[k];
        }
    }
    EpsilonSweep out;
    const MeanEstimate direct_mean = mean_and_se(direct);
    for (std::size_t k = 0; k < m; ++k) {
        EquivalenceReport rep;
        rep.epsilon = epsilons[k];
        rep.direct = direct_mean;
        rep.auction = mean_and_se(clock[k]);
        rep.difference = mean_and_se(gaps[k]);
        rep.clamped_draws = clamped[k];
        for (double g : gaps[k]) rep.max_abs_difference = std::max(rep.max_abs_difference, std::abs(g));
        out.reports.push_back(rep);
    }
    out.worst_margin_se = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < m; ++k) {
        std::vector<double> drop(n);
        for (std::size_t d = 0; d < n; ++d) drop[d] = gaps[k][d] - gaps[k + 1][d];
        const MeanEstimate e = mean_and_se(drop);
        out.gap_drops.push_back(e);
        if (e.mean < -3.0 * e.std_error) out.monotone = false;
        const double margin = e.std_error > 0.0 ? e.mean / e.std_error
                                                : (e.mean >= 0.0 ? std::numeric_limits<double>::infinity()
                                                                 : -std::numeric_limits<double>::infinity());
        out.worst_margin_se = std::min(out.worst_margin_se, margin);
    }
    return out;
}

} // namespace coauction
