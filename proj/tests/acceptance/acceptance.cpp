// SPDX-License-Identifier: MIT
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include "coauction/auction.hpp"
#include "coauction/error.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace coauction;

namespace {

using Clock = std::chrono::steady_clock;

const CollaborationMode kWp = CollaborationMode::winner_pivotal();
const CollaborationMode kSp = CollaborationMode::seller_pivotal();
const CollaborationMode kEs = CollaborationMode::effort_substitution();

struct Verdict {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<double> interior_grid(const TypeDistribution& d, int n) {
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k) g[k] = d.lo() + (d.hi() - d.lo()) * (k + 0.5) / n;
    return g;
}

// Positive types on an evenly spaced grid that includes the top type.
std::vector<double> closed_grid(const TypeDistribution& d, int n) {
    std::vector<double> g;
    for (int k = 0; k <= n; ++k) {
        const double t = k == n ? d.hi() : d.lo() + (d.hi() - d.lo()) * k / n;
        if (t > 0.0) g.push_back(t);
    }
    return g;
}

Market iid(const CollaborationMode& mode, const TypeDistribution& d, int n, bool curves = true) {
    std::vector<BidderProfile> b;
    for (int i = 0; i < n; ++i) b.push_back({i + 1, d});
    return Market(std::move(b), mode, {}, MarketOptions{curves});
}

Market quartet_market(const CollaborationMode& mode, bool curves = true) {
    std::vector<BidderProfile> b;
    int id = 1;
    for (const auto& d : oracle::default_quartet()) b.push_back({id++, d});
    return Market(std::move(b), mode, {}, MarketOptions{curves});
}

// Cleared-denominator stationarity residuals written out independently.
double wp_residual(double a, double r) {
    return (a * a * a - 3 * a * a + 4 * a - 1) - r * (1 - a + a * a) * (1 - a * a);
}
double sp_residual(double a, double r) { return (a * a * a + a - 1) - r * (1 - a + a * a) * (2 * a - 1); }

Verdict stationarity() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    int interior_sp = 0;
    for (const auto& d : oracle::default_quartet())
        for (double t : interior_grid(d, 100)) {
            const double r = oracle::inverse_hazard(d, t) / t;
            worst = std::max(worst, std::abs(wp_residual(alpha_wp(d, t).alpha, r)));
            const SharingSolution s = alpha_sp(d, t);
            if (s.branch == Branch::Interior) {
                worst = std::max(worst, std::abs(sp_residual(s.alpha, r)));
                ++interior_sp;
            }
        }
    const double el = seconds_since(t0);
    return {worst <= 1e-10 && el < 5.0 && interior_sp > 0,
            "worst residual " + fmt("%.3g", worst) + ", " + std::to_string(interior_sp) + " interior sp points, " +
                fmt("%.2f", el) + " s"};
}

Verdict oracle_agreement() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto dists = oracle::default_quartet();
    double worst = 0.0;
    for (int c = 0; c < 20; ++c) {
        const TypeDistribution& d = dists[static_cast<std::size_t>(unit(gen) * 4) % 4];
        const double theta = 0.02 + 0.98 * unit(gen);
        const double zeta = unit(gen);
        const auto grid = [&](const CollaborationMode& m) {
            return oracle::dense_argmax([&](double a) { return psi(m, d, a, theta); }, 0.0, 1.0, 1000000);
        };
        worst = std::max(worst, std::abs(alpha_wp(d, theta).alpha - grid(kWp)));
        worst = std::max(worst, std::abs(alpha_sp(d, theta).alpha - grid(kSp)));
        worst = std::max(worst, std::abs(alpha_es(d, theta).alpha - grid(kEs)));
        worst = std::max(worst,
                         std::abs(alpha_nested(d, theta, zeta).alpha - grid(CollaborationMode::nested(zeta))));
    }
    const double el = seconds_since(t0);
    return {worst <= 1e-5 && el < 60.0, "worst gap " + fmt("%.3g", worst) + ", " + fmt("%.2f", el) + " s"};
}

Verdict sharing_shape() {
    bool ok = true;
    double worst_sp_floor = 1.0;
    std::string why;
    for (const auto& d : oracle::default_quartet()) {
        const double tc = theta_c(d);
        const std::vector<double> g = closed_grid(d, 400);
        double prev_wp = 2.0;
        double prev_sp = 2.0;
        for (double t : g) {
            const double awp = alpha_wp(d, t).alpha;
            const SharingSolution sp = alpha_sp(d, t);
            if (!(awp < prev_wp)) {
                ok = false;
                why = "wp not strictly decreasing at " + fmt("%.4g", t);
            }
            if (t <= tc - 1e-9 && std::abs(sp.alpha - 1.0) > 1e-9) {
                ok = false;
                why = "sp below one in the pooling region at " + fmt("%.4g", t);
            }
            if (t > tc + 1e-9) {
                if (!(sp.alpha < prev_sp)) {
                    ok = false;
                    why = "sp not strictly decreasing at " + fmt("%.4g", t);
                }
                if (!(sp.alpha > 2.0 / 3.0)) {
                    ok = false;
                    why = "interior sp share not above 2/3 at " + fmt("%.4g", t);
                }
            }
            if (sp.alpha < 0.5 - 1e-9) ok = false;
            worst_sp_floor = std::min(worst_sp_floor, sp.alpha);
            prev_wp = awp;
            prev_sp = sp.alpha;
        }
    }
    return {ok, ok ? "smallest sp share " + fmt("%.6f", worst_sp_floor) : why};
}

Verdict sharing_dominance() {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& d : oracle::default_quartet())
        for (int n : {50, 100, 400, 1000})
            for (double t : closed_grid(d, n)) worst = std::min(worst, alpha_sp(d, t).alpha - alpha_wp(d, t).alpha);
    return {worst >= -1e-9, "smallest sp - wp gap " + fmt("%.3g", worst)};
}

Verdict surplus_shape() {
    double worst_value = std::numeric_limits<double>::infinity();
    double worst_slope = std::numeric_limits<double>::infinity();
    const CollaborationMode modes[] = {kWp, kSp, kEs, CollaborationMode::nested(0.25), CollaborationMode::nested(0.5),
                                       CollaborationMode::nested(0.75)};
    for (const auto& d : oracle::default_quartet())
        for (const CollaborationMode& m : modes) {
            const int n = 500;
            double prev = 0.0;
            for (int k = 0; k <= n; ++k) {
                const double t = d.lo() + (d.hi() - d.lo()) * k / n;
                const double p = phi(m, d, t);
                worst_value = std::min(worst_value, p);
                if (k > 0) worst_slope = std::min(worst_slope, (p - prev) / ((d.hi() - d.lo()) / n));
                prev = p;
            }
        }
    return {worst_value >= -1e-12 && worst_slope >= -1e-9,
            "min phi " + fmt("%.3g", worst_value) + ", min slope " + fmt("%.3g", worst_slope)};
}

Verdict effort_ordering() {
    double worst = std::numeric_limits<double>::infinity();
    std::string where;
    for (const auto& d : oracle::default_quartet())
        for (double t : interior_grid(d, 100)) {
            const oracle::EffortPair wp = oracle::equilibrium(kWp, alpha_wp(d, t).alpha, t);
            const oracle::EffortPair sp = oracle::equilibrium(kSp, alpha_sp(d, t).alpha, t);
            const double m = std::min({wp.winner - wp.seller, sp.seller - sp.winner, wp.winner - sp.winner,
                                       sp.seller - wp.seller});
            if (m < worst) {
                worst = m;
                where = d.describe() + " at " + fmt("%.4g", t);
            }
        }
    return {worst > 1e-12, "smallest margin " + fmt("%.3g", worst) + " (" + where + ")"};
}

Verdict revenue_ranking() {
    const QuadConfig q;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (const auto& d : oracle::default_quartet())
        for (int n : {1, 2, 5}) {
            const std::vector<TypeDistribution> ds(static_cast<std::size_t>(n), d);
            const double sp = expected_max_phi(kSp, ds);
            const double wp = expected_max_phi(kWp, ds);
            const double tol = q.rel_tol * std::max(std::abs(sp), std::abs(wp));
            worst_ratio = std::min(worst_ratio, (sp - wp) / tol);
        }
    return {worst_ratio > 10.0, "smallest gap " + fmt("%.3g", worst_ratio) + " quadrature tolerances"};
}

Verdict upper_bound_attainment() {
    const McConfig mc{100000, 7};
    const CollaborationMode modes[] = {kWp, kSp, kEs, CollaborationMode::nested(0.0), CollaborationMode::nested(0.25),
                                       CollaborationMode::nested(0.5)};
    double worst = 0.0;
    for (const CollaborationMode& m : modes)
        for (int which = 0; which < 2; ++which) {
            const Market market =
                which == 0 ? iid(m, TypeDistribution::uniform(0.0, 1.0), 2) : quartet_market(m);
            const RevenueEstimate r = seller_revenue_expected(market, mc);
            worst = std::max(worst, std::abs(r.monte_carlo.mean - r.quadrature) / r.monte_carlo.std_error);
        }
    return {worst <= 3.0, "worst deviation " + fmt("%.3g", worst) + " standard errors over 12 markets"};
}

Verdict incentive_compatibility() {
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto dists = oracle::default_quartet();
    double worst_gain = -std::numeric_limits<double>::infinity();
    double worst_ir = 0.0;
    for (int c = 0; c < 20; ++c) {
        const int kind = c % 4;
        const CollaborationMode mode = kind == 0   ? kWp
                                       : kind == 1 ? kSp
                                       : kind == 2 ? kEs
                                                   : CollaborationMode::nested(unit(gen));
        const TypeDistribution& d = dists[static_cast<std::size_t>(unit(gen) * 4) % 4];
        const int n = 1 + static_cast<int>(unit(gen) * 3);
        // Heterogeneous rivals only where the exact inverse surplus is cheap.
        const bool mixed = kind != 3 && c % 2 == 0;
        std::vector<BidderProfile> b{{1, d}};
        for (int j = 1; j < n; ++j) b.push_back({j + 1, mixed ? dists[static_cast<std::size_t>(j) % 4] : d});
        const Market market(std::move(b), mode, {}, MarketOptions{false});
        std::vector<double> grid;
        for (int k = 0; k <= 100; ++k) grid.push_back(d.lo() + (d.hi() - d.lo()) * k / 100.0);
        const double theta = d.lo() + (d.hi() - d.lo()) * unit(gen);
        worst_gain = std::max(worst_gain, ic_audit(market, 1, theta, grid).max_gain);
        worst_ir = std::max(worst_ir, std::abs(interim_payoff(market, 0, d.lo())));
    }
    return {worst_gain <= 1e-9 && worst_ir <= 1e-9,
            "max misreport gain " + fmt("%.3g", worst_gain) + ", |U(lowest type)| " + fmt("%.3g", worst_ir)};
}

Verdict implementation() {
    const McConfig mc{100000, 99};
    std::string detail;
    bool ok = true;

    // Winner-pivotal: per-draw transcript identity.
    double worst_rev = 0.0;
    double worst_cash = 0.0;
    int mismatched = 0;
    for (int which = 0; which < 2; ++which) {
        const Market m = which == 0 ? iid(kWp, TypeDistribution::uniform(0.0, 1.0), 2) : quartet_market(kWp);
        const ClockAuction auction(m, {});
        const CounterRng rng(mc.seed);
        for (std::int64_t i = 0; i < mc.n_draws; ++i) {
            const auto draw = static_cast<std::uint64_t>(i);
            const std::vector<double> types = m.draw_types(rng, draw);
            const std::uint64_t seed = rng.bits(0, draw);
            const DirectOutcome d = run_direct(m, types, seed, Evaluation::Cached);
            const AuctionTranscript t = auction.run(types, seed, Evaluation::Cached);
            if (d.winner != t.winner_id || std::abs(d.alpha - t.contract_alpha) > 1e-12) ++mismatched;
            worst_rev = std::max(worst_rev, std::abs(d.seller_revenue - t.seller_revenue));
            worst_cash = std::max(worst_cash, std::abs(d.cash_winner - t.contract_cash));
        }
    }
    ok = ok && worst_rev <= 1e-8 && worst_cash <= 1e-8 && mismatched == 0;
    detail += "wp max revenue diff " + fmt("%.3g", worst_rev) + ", mismatched " + std::to_string(mismatched);

    // Seller-pivotal: gap to the optimum shrinks as epsilon falls.
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int which = 0; which < 2; ++which) {
        const Market m = which == 0 ? iid(kSp, TypeDistribution::uniform(0.0, 1.0), 2) : quartet_market(kSp);
        const EpsilonSweep s = sweep_epsilon(m, {1e-2, 1e-3, 1e-4}, mc);
        ok = ok && s.monotone;
        worst_margin = std::min(worst_margin, s.worst_margin_se);
    }
    detail += "; sp smallest gap drop " + fmt("%.3g", worst_margin) + " paired SE";

    // Quasi-dominance of the drop-out strategy.
    std::mt19937_64 gen(4242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_probe = -std::numeric_limits<double>::infinity();
    for (const CollaborationMode& mode : {kWp, kSp}) {
        const Market m = quartet_market(mode, false);
        const ClockAuction auction(m, {});
        for (int v = 0; v < 10; ++v) {
            std::vector<double> types;
            for (std::size_t i = 0; i < m.size(); ++i) types.push_back(m.distribution(i).quantile(unit(gen)));
            for (std::size_t i = 0; i < m.size(); ++i) {
                const TypeDistribution& d = m.distribution(i);
                const double lo = m.phi(i, d.lo(), Evaluation::Exact);
                const double hi = 1.2 * m.phi(i, d.hi(), Evaluation::Exact);
                for (int k = 0; k <= 100; ++k)
                    worst_probe = std::max(worst_probe, auction.deviation_probe(types, i, lo + (hi - lo) * k / 100.0));
            }
        }
    }
    ok = ok && worst_probe <= 1e-9;
    detail += "; max deviation gain " + fmt("%.3g", worst_probe);
    return {ok, detail};
}

Verdict nesting() {
    double worst_phi = 0.0;
    for (const auto& d : oracle::default_quartet())
        for (double t : closed_grid(d, 50)) {
            worst_phi = std::max(worst_phi, std::abs(phi(CollaborationMode::nested(1.0), d, t) - phi(kWp, d, t)));
            worst_phi = std::max(worst_phi, std::abs(phi(CollaborationMode::nested(0.0), d, t) - phi(kSp, d, t)));
        }
    double worst_sym = 0.0;
    for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 25; ++j) {
            const double a = i / 24.0;
            const double z = j / 24.0;
            worst_sym = std::max(worst_sym, std::abs(nested_coefficients(a, z).a - nested_coefficients(1 - a, 1 - z).a));
        }
    return {worst_phi <= 1e-6 && worst_sym <= 1e-12,
            "worst surplus gap " + fmt("%.3g", worst_phi) + ", worst symmetry gap " + fmt("%.3g", worst_sym)};
}

Verdict zeta_star() {
    std::string detail;
    bool ok = true;
    for (const auto& d : oracle::default_quartet())
        for (int n : {1, 2, 5}) {
            const std::vector<TypeDistribution> ds(static_cast<std::size_t>(n), d);
            double best = -1.0;
            int best_k = 0;
            for (int k = 0; k <= 100; ++k) {
                const double v = expected_max_phi(CollaborationMode::nested(k / 100.0), ds);
                if (v > best) {
                    best = v;
                    best_k = k;
                }
            }
            ok = ok && best_k <= 50;
            detail += (detail.empty() ? "" : " ") + std::to_string(best_k);
        }
    return {ok, "argmax zeta x100 per (distribution, n): " + detail};
}

} // namespace

int main() {
    const auto start = Clock::now();
    struct Entry {
        int id;
        const char* name;
        std::function<Verdict()> run;
    };
    const std::vector<Entry> entries{
        {1, "stationarity", stationarity},
        {2, "oracle equivalence", oracle_agreement},
        {3, "sharing shape", sharing_shape},
        {4, "sharing dominance", sharing_dominance},
        {5, "surplus sign and monotonicity", surplus_shape},
        {6, "effort ordering", effort_ordering},
        {7, "revenue ranking", revenue_ranking},
        {8, "upper-bound attainment", upper_bound_attainment},
        {9, "incentive compatibility and participation", incentive_compatibility},
        {10, "clock auction implementation", implementation},
        {11, "nesting consistency", nesting},
        {12, "optimal interdependence", zeta_star},
    };
    int failures = 0;
    for (const Entry& e : entries) {
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = e.run();
        } catch (const std::exception& ex) {
            v = {false, std::string("error: ") + ex.what()};
        }
        if (!v.pass) ++failures;
        std::printf("criterion %2d %-44s %s  %s [%.2f s]\n", e.id, e.name, v.pass ? "PASS" : "FAIL", v.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    const double total = seconds_since(start);
    const bool fast = total < 300.0;
    if (!fast) ++failures;
    std::printf("criterion %2d %-44s %s  total %.2f s\n", 13, "suite wall-clock", fast ? "PASS" : "FAIL", total);
    return failures == 0 ? 0 : 1;
}
