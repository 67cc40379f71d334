// SPDX-License-Identifier: MIT
#pragma once

#include "coauction/mechanism.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace coauction {

struct AuctionConfig {
    // Share the seller-pivotal contract leaves with the winner; unused for winner-pivotal.
    double epsilon = 1e-3;
    // Reporting granularity of the clock; strategies use exact prices.
    double clock_resolution = 1e-6;
};

struct AuctionTranscript {
    // Exit prices in ascending order with the bidder ids that hold them.
    std::vector<double> exit_prices;
    std::vector<int> exit_order;
    std::vector<std::int64_t> exit_ticks;
    double clock_start = 0.0;
    std::optional<int> winner_id;
    double price_runner_up = 0.0;
    double price_winner = 0.0;
    double contract_alpha = 0.0;
    bool alpha_clamped = false;
    double contract_cash = 0.0;
    double posterior_type = 0.0;
    double pivot_type = 0.0;
    Efforts efforts;
    double realized_value = 0.0;
    double seller_revenue = 0.0;
    // Indexed like the market's bidders.
    std::vector<double> bidder_payoffs;
};

// Ascending clock auction over a fixed market. Exit prices are computed
// analytically: every bidder drops out at its own virtual surplus.
class ClockAuction {
public:
    ClockAuction(const Market& market, const AuctionConfig& config);

    const Market& market() const noexcept { return market_; }
    const AuctionConfig& config() const noexcept { return config_; }

    AuctionTranscript run(const std::vector<double>& types, std::uint64_t seed,
                          Evaluation eval = Evaluation::Exact) const;

    // Deviant payoff minus equilibrium payoff when bidder `deviant` exits at
    // exit_price and everyone else follows the drop-out strategy. Ties at the
    // top are averaged rather than drawn.
    double deviation_probe(const std::vector<double>& types, std::size_t deviant, double exit_price,
                           Evaluation eval = Evaluation::Exact) const;

    struct Contract {
        double alpha = 0.0;
        bool clamped = false;
        double posterior = 0.0;
        double pivot = 0.0;
        double cash = 0.0;
    };
    // Contract for bidder i winning at price p_win against runner-up price p_second.
    Contract contract(std::size_t i, double p_win, double p_second, Evaluation eval) const;

private:
    double shift() const noexcept;
    double rent(std::size_t i, double a, double b, Evaluation eval) const;
    double winner_payoff(std::size_t i, double theta, double p_win, double p_second, Evaluation eval) const;
    double floor_price(std::size_t i, Evaluation eval) const;

    const Market& market_;
    AuctionConfig config_;
    std::vector<SurplusCurve> shifted_;
};

AuctionTranscript run_auction(const Market& market, const std::vector<double>& types, const AuctionConfig& config,
                              std::uint64_t seed, Evaluation eval = Evaluation::Exact);

double deviation_probe(const Market& market, const std::vector<double>& types, int deviant_id, double exit_price,
                       const AuctionConfig& config, Evaluation eval = Evaluation::Exact);

struct EquivalenceReport {
    double epsilon = 0.0;
    MeanEstimate direct;
    MeanEstimate auction;
    // Per-draw direct revenue minus auction revenue.
    MeanEstimate difference;
    double max_abs_difference = 0.0;
    std::int64_t clamped_draws = 0;
};

EquivalenceReport revenue_equivalence_check(const Market& market, const AuctionConfig& config, const McConfig& mc,
                                            Evaluation eval = Evaluation::Cached);

struct EpsilonSweep {
    std::vector<EquivalenceReport> reports;
    // Paired gap(eps_k) - gap(eps_{k+1}) per consecutive pair, eps decreasing.
    std::vector<MeanEstimate> gap_drops;
    bool monotone = true;
    // Smallest gap drop measured in paired standard errors.
    double worst_margin_se = 0.0;
};

// Paired sweep over decreasing epsilons on one set of draws.
EpsilonSweep sweep_epsilon(const Market& market, std::vector<double> epsilons, const McConfig& mc,
                           Evaluation eval = Evaluation::Cached);

} // namespace coauction
