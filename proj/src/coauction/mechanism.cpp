// SPDX-License-Identifier: MIT
#include "coauction/mechanism.hpp"

#include "coauction/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace coauction {

Efforts efforts(const CollaborationMode& mode, double alpha, double own_type, const PosteriorBelief& posterior) {
    require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::InvalidArgument, "share must lie in [0,1]");
    const double d = effort_denominator(alpha);
    const double m = posterior.mean;
    Efforts e;
    switch (mode.kind) {
    case ModeKind::WinnerPivotal:
        e.seller = (1.0 - alpha) * alpha * m / d;
        e.winner = (1.0 - alpha) * (own_type + e.seller);
        break;
    case ModeKind::SellerPivotal:
        e.seller = alpha * m / d;
        e.winner = (1.0 - alpha) * e.seller;
        break;
    case ModeKind::EffortSubstitution:
        e.seller = alpha * m;
        e.winner = (1.0 - alpha) * own_type;
        break;
    case ModeKind::Nested:
        e.seller = alpha * (1.0 - alpha * mode.zeta) * m / d;
        e.winner = (1.0 - alpha) * (mode.zeta * own_type + e.seller);
        break;
    }
    return e;
}

double realized_value(const CollaborationMode& mode, double theta, const Efforts& e) {
    switch (mode.kind) {
    case ModeKind::WinnerPivotal: return (theta + e.seller) * e.winner;
    case ModeKind::SellerPivotal: return (theta + e.winner) * e.seller;
    case ModeKind::EffortSubstitution: return theta * (e.seller + e.winner);
    case ModeKind::Nested: return (mode.zeta * theta + e.seller) * ((1.0 - mode.zeta) * theta + e.winner);
    }
    return 0.0;
}

double winner_gross_payoff(const CollaborationMode& mode, double alpha, double theta, double posterior_mean) {
    const Efforts e = efforts(mode, alpha, theta, {posterior_mean, true});
    return (1.0 - alpha) * realized_value(mode, theta, e) - 0.5 * e.winner * e.winner;
}

double winner_cash_payment(const CollaborationMode& mode, const TypeDistribution& dist, double theta_win,
                           double theta_pivot, const SolverConfig& cfg) {
    require(theta_pivot <= theta_win, ErrorCode::InvalidArgument, "pivot type exceeds the winning type");
    const double alpha = alpha_star(mode, dist, theta_win, cfg).alpha;
    return winner_gross_payoff(mode, alpha, theta_win, theta_win) -
           rent_integral(mode, dist, theta_pivot, theta_win, 0.0, cfg);
}

Market::Market(std::vector<BidderProfile> bidders, const CollaborationMode& mode, const SolverConfig& cfg,
               const MarketOptions& options)
    : bidders_(std::move(bidders)), mode_(mode), cfg_(cfg) {
    require(!bidders_.empty(), ErrorCode::InvalidArgument, "a market needs at least one bidder");
    for (std::size_t i = 0; i < bidders_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            require(bidders_[i].bidder_id != bidders_[j].bidder_id, ErrorCode::InvalidArgument,
                    "bidder ids must be unique");
        const ValidationReport rep = validate(bidders_[i].distribution);
        if (!rep.all_pass()) {
            std::ostringstream os;
            os << "bidder " << bidders_[i].bidder_id << " distribution " << bidders_[i].distribution.describe()
               << " fails:";
            for (const AssumptionCheck& c : rep.checks)
                if (!c.pass) os << ' ' << c.name << " (worst " << c.worst_violation << " at " << c.where << ")";
            fail(ErrorCode::InvalidArgument, os.str());
        }
        if (!bidders_[i].distribution.same_law(bidders_[0].distribution)) identical_ = false;
    }
    if (!options.build_curves) return;

    curves_.reserve(bidders_.size());
    for (std::size_t i = 0; i < bidders_.size(); ++i) {
        if (i > 0 && bidders_[i].distribution.same_law(bidders_[0].distribution)) {
            curves_.push_back(curves_.front());
            continue;
        }
        curves_.emplace_back(mode_, bidders_[i].distribution, cfg_);
        if (mode_.kind != ModeKind::Nested) continue;
        for (const CurvePoint& p : curves_.back().points()) {
            if (p.theta <= 0.0) continue;
            const ConditionReport r = evaluate_conditions(bidders_[i].distribution, p.theta, mode_.zeta,
                                                          SharingSolution{p.alpha, p.branch, 0.0});
            if (!r.satisfied) {
                std::ostringstream os;
                os << "nested mechanism with zeta=" << mode_.zeta << " is outside the existence conditions at type "
                   << p.theta << ": dA/dalpha=" << r.d_a << ", dH/dalpha=" << r.d_h;
                fail(ErrorCode::ConditionViolated, os.str());
            }
        }
    }
}

const SurplusCurve& Market::curve(std::size_t i) const {
    require(has_curves(), ErrorCode::InvalidArgument, "market was built without surplus curves");
    return curves_.at(i);
}

std::size_t Market::index_of(int bidder_id) const {
    for (std::size_t i = 0; i < bidders_.size(); ++i)
        if (bidders_[i].bidder_id == bidder_id) return i;
    fail(ErrorCode::InvalidArgument, "unknown bidder id " + std::to_string(bidder_id));
}

double Market::phi(std::size_t i, double theta, Evaluation eval) const {
    if (eval == Evaluation::Cached) return curve(i).phi(theta);
    return coauction::phi(mode_, distribution(i), theta, cfg_);
}

double Market::phi_inverse(std::size_t i, double p, Evaluation eval) const {
    if (eval == Evaluation::Cached) return curve(i).phi_inverse(p);
    return coauction::phi_inverse(mode_, distribution(i), p, cfg_);
}

double Market::rent(std::size_t i, double a, double b, Evaluation eval) const {
    if (eval == Evaluation::Cached) return curve(i).rent(a, b);
    return rent_integral(mode_, distribution(i), a, b, 0.0, cfg_);
}

double Market::pivot_type(std::size_t i, double rival_phi, Evaluation eval) const {
    const TypeDistribution& d = distribution(i);
    if (rival_phi <= phi(i, d.lo(), eval)) return d.lo();
    return phi_inverse(i, rival_phi, eval);
}

double Market::surplus_cdf(std::size_t j, double x, Evaluation eval) const {
    const TypeDistribution& d = distribution(j);
    if (x < phi(j, d.lo(), eval)) return 0.0;
    if (x >= phi(j, d.hi(), eval)) return 1.0;
    return d.cdf(phi_inverse(j, x, eval));
}

std::vector<double> Market::draw_types(const CounterRng& rng, std::uint64_t draw) const {
    std::vector<double> types(bidders_.size());
    for (std::size_t i = 0; i < bidders_.size(); ++i)
        types[i] = bidders_[i].distribution.quantile(rng.uniform(i + 1, draw));
    return types;
}

std::size_t pick_highest(const std::vector<double>& scores, std::uint64_t seed) {
    require(!scores.empty(), ErrorCode::InvalidArgument, "no scores to rank");
    const double top = *std::max_element(scores.begin(), scores.end());
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] == top) tied.push_back(i);
    if (tied.size() == 1) return tied.front();
    const double u = CounterRng(seed).uniform(kTieStream, 0);
    const auto k = std::min(tied.size() - 1, static_cast<std::size_t>(u * static_cast<double>(tied.size())));
    return tied[k];
}

namespace {

void check_types(const Market& market, const std::vector<double>& types) {
    require(types.size() == market.size(), ErrorCode::InvalidArgument, "one type per bidder is required");
    for (std::size_t i = 0; i < types.size(); ++i) {
        const TypeDistribution& d = market.distribution(i);
        require(types[i] >= d.lo() && types[i] <= d.hi(), ErrorCode::Domain, "type outside its support");
    }
}

std::vector<double> surpluses(const Market& market, const std::vector<double>& types, Evaluation eval) {
    std::vector<double> phis(types.size());
    for (std::size_t i = 0; i < types.size(); ++i) phis[i] = market.phi(i, types[i], eval);
    return phis;
}

} // namespace

std::optional<int> allocate(const Market& market, const std::vector<double>& types, std::uint64_t seed,
                            Evaluation eval) {
    check_types(market, types);
    const std::vector<double> phis = surpluses(market, types, eval);
    return market.bidders()[pick_highest(phis, seed)].bidder_id;
}

DirectOutcome run_direct(const Market& market, const std::vector<double>& types, std::uint64_t seed,
                         Evaluation eval) {
    check_types(market, types);
    DirectOutcome out;
    out.virtual_surplus = surpluses(market, types, eval);
    const std::size_t w = pick_highest(out.virtual_surplus, seed);
    const double theta = types[w];
    const TypeDistribution& dist = market.distribution(w);
    out.winner = market.bidders()[w].bidder_id;

    double rival = -1.0;
    bool tie = false;
    for (std::size_t j = 0; j < types.size(); ++j) {
        if (j == w) continue;
        if (out.virtual_surplus[j] > rival) rival = out.virtual_surplus[j];
        if (out.virtual_surplus[j] == out.virtual_surplus[w]) tie = true;
    }
    if (types.size() == 1)
        out.pivot_type = dist.lo();
    else if (tie)
        out.pivot_type = theta;
    else
        out.pivot_type = std::min(market.pivot_type(w, rival, eval), theta);

    const SharingSolution share = alpha_star(market.mode(), dist, theta, market.config());
    out.alpha = share.alpha;
    out.revealed_type = theta;
    const Efforts e = efforts(market.mode(), out.alpha, theta, {theta, true});
    out.effort_seller = e.seller;
    out.effort_winner = e.winner;
    out.realized_value = realized_value(market.mode(), theta, e);
    const double gross = (1.0 - out.alpha) * out.realized_value - 0.5 * e.winner * e.winner;
    out.cash_winner = gross - market.rent(w, out.pivot_type, theta, eval);
    out.cash_losers.assign(types.size() - 1, 0.0);
    out.seller_revenue = out.cash_winner + out.alpha * out.realized_value - 0.5 * e.seller * e.seller;
    out.bidder_payoffs.assign(types.size(), 0.0);
    out.bidder_payoffs[w] = gross - out.cash_winner;
    return out;
}

namespace {

double iid_expected_max(const ScalarFn& phi_of, const TypeDistribution& d, std::size_t n, const QuadConfig& q) {
    const double nn = static_cast<double>(n);
    return integrate(
        [&](double t) {
            const double f = d.pdf(t);
            if (f == 0.0) return 0.0;
            const double lead = n > 1 ? nn * std::pow(d.cdf(t), nn - 1.0) : 1.0;
            return phi_of(t) * lead * f;
        },
        d.lo(), d.hi(), q);
}

} // namespace

double expected_max_phi(const Market& market, Evaluation eval) {
    const QuadConfig& q = market.config().quad;
    if (market.identical_bidders())
        return iid_expected_max([&](double t) { return market.phi(0, t, eval); }, market.distribution(0),
                                market.size(), q);
    double total = 0.0;
    for (std::size_t i = 0; i < market.size(); ++i) {
        const TypeDistribution& d = market.distribution(i);
        total += integrate(
            [&](double t) {
                const double f = d.pdf(t);
                if (f == 0.0) return 0.0;
                const double p = market.phi(i, t, eval);
                double others = 1.0;
                for (std::size_t j = 0; j < market.size() && others > 0.0; ++j)
                    if (j != i) others *= market.surplus_cdf(j, p, eval);
                return p * f * others;
            },
            d.lo(), d.hi(), q);
    }
    return total;
}

double expected_max_phi(const CollaborationMode& mode, const std::vector<TypeDistribution>& dists,
                        const SolverConfig& cfg) {
    require(!dists.empty(), ErrorCode::InvalidArgument, "no distributions given");
    std::vector<BidderProfile> bidders;
    for (std::size_t i = 0; i < dists.size(); ++i) bidders.push_back({static_cast<int>(i), dists[i]});
    const Market market(std::move(bidders), mode, cfg, MarketOptions{false});
    return expected_max_phi(market, Evaluation::Exact);
}

MeanEstimate simulate_direct_revenue(const Market& market, const McConfig& mc, Evaluation eval) {
    require(mc.n_draws >= 1, ErrorCode::InvalidArgument, "Monte Carlo needs at least one draw");
    const CounterRng rng(mc.seed);
    std::vector<double> revenue(static_cast<std::size_t>(mc.n_draws));
    for (std::int64_t d = 0; d < mc.n_draws; ++d) {
        const auto draw = static_cast<std::uint64_t>(d);
        revenue[draw] = run_direct(market, market.draw_types(rng, draw), rng.bits(0, draw), eval).seller_revenue;
    }
    return mean_and_se(revenue);
}

RevenueEstimate seller_revenue_expected(const Market& market, const McConfig& mc) {
    RevenueEstimate out;
    out.quadrature = expected_max_phi(market, Evaluation::Exact);
    out.monte_carlo = simulate_direct_revenue(market, mc, market.has_curves() ? Evaluation::Cached : Evaluation::Exact);
    return out;
}

double win_probability(const Market& market, std::size_t i, double theta, Evaluation eval) {
    const TypeDistribution& own = market.distribution(i);
    double q = 1.0;
    double p = 0.0;
    bool have_p = false;
    for (std::size_t j = 0; j < market.size() && q > 0.0; ++j) {
        if (j == i) continue;
        const TypeDistribution& dj = market.distribution(j);
        if (dj.same_law(own)) {
            q *= own.cdf(theta);
            continue;
        }
        if (!have_p) {
            p = market.phi(i, theta, eval);
            have_p = true;
        }
        q *= market.surplus_cdf(j, p, eval);
    }
    return q;
}

namespace {

double weighted_rent(const Market& market, std::size_t i, double a, double b) {
    const CollaborationMode& mode = market.mode();
    const TypeDistribution& d = market.distribution(i);
    const SolverConfig& cfg = market.config();
    return integrate(
        [&](double t) {
            const double w = rent_slope(mode, d, t, 0.0, cfg);
            return w == 0.0 ? 0.0 : w * win_probability(market, i, t);
        },
        a, b, cfg.quad);
}

} // namespace

double interim_payoff(const Market& market, std::size_t i, double theta) {
    return weighted_rent(market, i, market.distribution(i).lo(), theta);
}

AuditReport ic_audit(const Market& market, int bidder_id, double true_theta, const std::vector<double>& report_grid) {
    const std::size_t i = market.index_of(bidder_id);
    const TypeDistribution& d = market.distribution(i);
    const CollaborationMode& mode = market.mode();
    require(true_theta >= d.lo() && true_theta <= d.hi(), ErrorCode::Domain, "true type outside its support");
    AuditReport rep;
    rep.bidder_id = bidder_id;
    rep.true_theta = true_theta;
    rep.truthful_payoff = interim_payoff(market, i, true_theta);
    rep.max_gain = -std::numeric_limits<double>::infinity();
    rep.argmax_report = true_theta;
    for (double r : report_grid) {
        require(r >= d.lo() && r <= d.hi(), ErrorCode::Domain, "report outside the support");
        double gain = 0.0;
        if (r != true_theta) {
            const double alpha = alpha_star(mode, d, r, market.config()).alpha;
            const double q = win_probability(market, i, r);
            const double shift = winner_gross_payoff(mode, alpha, true_theta, r) - winner_gross_payoff(mode, alpha, r, r);
            // Deviation payoff minus truthful payoff, with the two envelope
            // integrals netted into one over [r, true_theta].
            const double between = r < true_theta ? weighted_rent(market, i, r, true_theta)
                                                  : -weighted_rent(market, i, true_theta, r);
            gain = q * shift - between;
        }
        rep.reports.push_back(r);
        rep.gains.push_back(gain);
        if (gain > rep.max_gain) {
            rep.max_gain = gain;
            rep.argmax_report = r;
        }
    }
    if (report_grid.empty()) rep.max_gain = 0.0;
    return rep;
}

} // namespace coauction
