// SPDX-License-Identifier: MIT
#pragma once

#include "coauction/distribution.hpp"
#include "coauction/numerics.hpp"
#include "coauction/objective.hpp"
#include "coauction/sharing.hpp"
#include "coauction/surplus.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace coauction {

struct PosteriorBelief {
    double mean = 0.0;
    bool is_dirac = true;
};

struct Efforts {
    double seller = 0.0;
    double winner = 0.0;
};

// Seller effort from the posterior mean, winner's best response from its own type.
Efforts efforts(const CollaborationMode& mode, double alpha, double own_type, const PosteriorBelief& posterior);

double realized_value(const CollaborationMode& mode, double theta, const Efforts& e);

// (1 - alpha) V - e_b^2 / 2 before cash, for a winner of true type theta
// facing a seller who believes the type is posterior_mean.
double winner_gross_payoff(const CollaborationMode& mode, double alpha, double theta, double posterior_mean);

// Exact cash payment of a winner of type theta_win whose pivot type is theta_pivot.
double winner_cash_payment(const CollaborationMode& mode, const TypeDistribution& dist, double theta_win,
                           double theta_pivot, const SolverConfig& cfg = {});

// Exact evaluates every solver at the point of use. Cached reads virtual
// surpluses, their inverses and rent integrals from the bidders' curves.
enum class Evaluation { Exact, Cached };

struct MarketOptions {
    bool build_curves = true;
};

class Market {
public:
    Market(std::vector<BidderProfile> bidders, const CollaborationMode& mode, const SolverConfig& cfg = {},
           const MarketOptions& options = {});

    const std::vector<BidderProfile>& bidders() const noexcept { return bidders_; }
    std::size_t size() const noexcept { return bidders_.size(); }
    const CollaborationMode& mode() const noexcept { return mode_; }
    const SolverConfig& config() const noexcept { return cfg_; }
    const TypeDistribution& distribution(std::size_t i) const { return bidders_.at(i).distribution; }
    bool has_curves() const noexcept { return !curves_.empty(); }
    const SurplusCurve& curve(std::size_t i) const;
    std::size_t index_of(int bidder_id) const;
    bool identical_bidders() const noexcept { return identical_; }

    double phi(std::size_t i, double theta, Evaluation eval) const;
    double phi_inverse(std::size_t i, double p, Evaluation eval) const;
    double rent(std::size_t i, double a, double b, Evaluation eval) const;
    // Lowest own type that still beats a rival surplus of p.
    double pivot_type(std::size_t i, double rival_phi, Evaluation eval) const;
    // P(phi_j(theta_j) <= x) for bidder j.
    double surplus_cdf(std::size_t j, double x, Evaluation eval) const;

    // Independent types for draw number `draw`.
    std::vector<double> draw_types(const CounterRng& rng, std::uint64_t draw) const;

private:
    std::vector<BidderProfile> bidders_;
    CollaborationMode mode_;
    SolverConfig cfg_;
    std::vector<SurplusCurve> curves_;
    bool identical_ = true;
};

struct DirectOutcome {
    std::optional<int> winner;
    double alpha = 0.0;
    double cash_winner = 0.0;
    std::vector<double> cash_losers;
    double revealed_type = 0.0;
    double pivot_type = 0.0;
    double effort_seller = 0.0;
    double effort_winner = 0.0;
    double realized_value = 0.0;
    double seller_revenue = 0.0;
    std::vector<double> bidder_payoffs;
    std::vector<double> virtual_surplus;
};

inline constexpr std::uint64_t kTieStream = 0x7469655F62726B31ULL;

// Index of the highest virtual surplus; ties are broken uniformly with the seed.
std::size_t pick_highest(const std::vector<double>& scores, std::uint64_t seed);

std::optional<int> allocate(const Market& market, const std::vector<double>& types, std::uint64_t seed,
                            Evaluation eval = Evaluation::Exact);

DirectOutcome run_direct(const Market& market, const std::vector<double>& types, std::uint64_t seed,
                         Evaluation eval = Evaluation::Exact);

// E[max_i phi_i(theta_i)] by quadrature.
double expected_max_phi(const Market& market, Evaluation eval = Evaluation::Exact);
double expected_max_phi(const CollaborationMode& mode, const std::vector<TypeDistribution>& dists,
                        const SolverConfig& cfg = {});

// Seeded Monte Carlo mean of run_direct seller revenue.
MeanEstimate simulate_direct_revenue(const Market& market, const McConfig& mc, Evaluation eval = Evaluation::Cached);

struct RevenueEstimate {
    double quadrature = 0.0;
    MeanEstimate monte_carlo;
};

RevenueEstimate seller_revenue_expected(const Market& market, const McConfig& mc);

struct AuditReport {
    int bidder_id = 0;
    double true_theta = 0.0;
    double truthful_payoff = 0.0;
    double max_gain = 0.0;
    double argmax_report = 0.0;
    std::vector<double> reports;
    std::vector<double> gains;
};

// Interim probability that bidder i wins with a report of theta.
double win_probability(const Market& market, std::size_t i, double theta, Evaluation eval = Evaluation::Exact);

// Interim truthful payoff of bidder i at type theta (envelope integral).
double interim_payoff(const Market& market, std::size_t i, double theta);

AuditReport ic_audit(const Market& market, int bidder_id, double true_theta, const std::vector<double>& report_grid);

} // namespace coauction
