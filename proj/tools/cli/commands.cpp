// SPDX-License-Identifier: MIT
#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace cli {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr coa_mode kWp{COA_WINNER_PIVOTAL, 0.0};
constexpr coa_mode kSp{COA_SELLER_PIVOTAL, 0.0};

std::string sfmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

struct Support {
    double lo = 0.0;
    double hi = 1.0;
};

Support support(const coa_dist* d) {
    Support s;
    check(coa_dist_support(d, &s.lo, &s.hi));
    return s;
}

std::vector<double> closed_grid(Support s, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) g[k] = k + 1 == n ? s.hi : s.lo + (s.hi - s.lo) * k / (n - 1);
    return g;
}

std::vector<double> interior_grid(Support s, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) g[k] = s.lo + (s.hi - s.lo) * (k + 0.5) / n;
    return g;
}

std::vector<double> zeta_grid(double step) {
    std::vector<double> g;
    for (long k = 0;; ++k) {
        const double z = static_cast<double>(k) * step;
        if (z > 1.0 + 1e-12) break;
        g.push_back(std::min(z, 1.0));
    }
    if (g.back() < 1.0 - 1e-12) g.push_back(1.0);
    return g;
}

coa_sharing share(coa_mode m, const coa_dist* d, double theta, const ExperimentConfig& cfg) {
    coa_sharing s;
    check(coa_alpha_star(m, d, theta, &cfg.solver, &s));
    return s;
}

double phi(coa_mode m, const coa_dist* d, double theta, const ExperimentConfig& cfg) {
    double v = 0.0;
    check(coa_phi(m, d, theta, &cfg.solver, &v));
    return v;
}

double expected_max(coa_mode m, const coa_dist* d, int n, const ExperimentConfig& cfg) {
    const std::vector<const coa_dist*> ds(static_cast<std::size_t>(n), d);
    double v = 0.0;
    check(coa_expected_max_phi(m, ds.data(), ds.size(), &cfg.solver, &v));
    return v;
}

MarketHandle make_market(const ExperimentConfig& cfg, const std::vector<BidderSpec>& bidders, coa_mode mode,
                         bool curves) {
    std::vector<DistHandle> owned;
    std::vector<const coa_dist*> dists;
    std::vector<int> ids;
    for (const auto& b : bidders) {
        owned.push_back(make_distribution(cfg.distribution(b.distribution)));
        dists.push_back(owned.back().get());
        ids.push_back(b.id);
    }
    coa_market* raw = nullptr;
    check(coa_market_create(ids.data(), dists.data(), dists.size(), mode, &cfg.solver, curves ? 1 : 0, &raw));
    return MarketHandle(raw);
}

std::vector<BidderSpec> duopoly(const std::string& dist) { return {{1, dist}, {2, dist}}; }

coa_auction_config auction_config(const ExperimentConfig& cfg, double epsilon) {
    coa_auction_config a;
    coa_auction_config_default(&a);
    a.epsilon = epsilon;
    a.clock_resolution = cfg.auction.clock_resolution;
    return a;
}

template <class T>
std::string joined(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        if constexpr (std::is_same_v<T, double>) {
            out += num(v[i]);
        } else {
            out += std::to_string(v[i]);
        }
    }
    return out;
}

// ---- verify -----------------------------------------------------------

struct Check {
    std::string name;
    bool pass = true;
    double statistic = 0.0;
    double bound = 0.0;
    double margin = 0.0; // nonnegative exactly when the check passes
    std::string detail;
};

Check at_most(std::string name, double statistic, double bound, std::string detail = {}) {
    return {std::move(name), statistic <= bound, statistic, bound, bound - statistic, std::move(detail)};
}

Check above(std::string name, double statistic, double bound, bool strict, std::string detail = {}) {
    const bool pass = strict ? statistic > bound : statistic >= bound;
    return {std::move(name), pass, statistic, bound, statistic - bound, std::move(detail)};
}

struct Subject {
    const ExperimentConfig& cfg;
    const DistributionSpec& spec;
    const coa_dist* d;
    Support s;
};

Check stationarity(const Subject& x) {
    double worst = 0.0;
    int interior = 0;
    for (double t : interior_grid(x.s, x.cfg.theta_points)) {
        if (t <= 0.0) continue;
        worst = std::max(worst, share(kWp, x.d, t, x.cfg).residual);
        const coa_sharing sp = share(kSp, x.d, t, x.cfg);
        if (sp.branch == COA_BRANCH_INTERIOR) {
            worst = std::max(worst, sp.residual);
            ++interior;
        }
    }
    return at_most("stationarity", worst, x.cfg.tol.stationarity, sfmt("%d interior sp points", interior));
}

Check sharing_dominance(const Subject& x) {
    double worst = kInf;
    for (double t : closed_grid(x.s, x.cfg.theta_points))
        if (t > 0.0) worst = std::min(worst, share(kSp, x.d, t, x.cfg).alpha - share(kWp, x.d, t, x.cfg).alpha);
    return above("sharing_dominance", worst, -x.cfg.tol.ordering, false, "min alpha_sp - alpha_wp");
}

Check sharing_shape(const Subject& x) {
    double tc = 0.0;
    check(coa_theta_c(x.d, &x.cfg.solver, &tc));
    const double tol = x.cfg.tol.ordering;
    int violations = 0;
    std::string first;
    auto flag = [&](const std::string& why) {
        if (violations++ == 0) first = why;
    };
    double prev_wp = kInf;
    double prev_sp = kInf;
    for (double t : closed_grid(x.s, x.cfg.theta_points)) {
        if (t <= 0.0) continue;
        const double wp = share(kWp, x.d, t, x.cfg).alpha;
        const double sp = share(kSp, x.d, t, x.cfg).alpha;
        if (!(wp < prev_wp)) flag(sfmt("alpha_wp not decreasing at %.6g", t));
        if (t <= tc - tol && std::abs(sp - 1.0) > tol) flag(sfmt("alpha_sp below 1 in the pooling region at %.6g", t));
        if (t > tc + tol && !(sp < prev_sp)) flag(sfmt("alpha_sp not decreasing at %.6g", t));
        if (t > tc + tol && !(sp > 2.0 / 3.0)) flag(sfmt("interior alpha_sp not above 2/3 at %.6g", t));
        if (sp < 0.5 - tol) flag(sfmt("alpha_sp below 1/2 at %.6g", t));
        prev_wp = wp;
        prev_sp = sp;
    }
    return at_most("sharing_shape", violations, 0.0,
                   violations == 0 ? sfmt("theta_c %.6g", tc) : sfmt("%d violations, first: %s", violations, first.c_str()));
}

std::vector<Check> surplus_shape(const Subject& x) {
    double worst_value = kInf;
    double worst_slope = kInf;
    std::string where;
    const std::vector<double> g = closed_grid(x.s, x.cfg.theta_points);
    for (const ModeSpec& m : x.cfg.modes) {
        double prev = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double p = phi(m.api(), x.d, g[k], x.cfg);
            worst_value = std::min(worst_value, p);
            if (k > 0) {
                const double slope = (p - prev) / (g[k] - g[k - 1]);
                if (slope < worst_slope) {
                    worst_slope = slope;
                    where = m.label();
                }
            }
            prev = p;
        }
    }
    return {above("surplus_nonnegative", worst_value, -x.cfg.tol.surplus_value, false),
            above("surplus_monotone", worst_slope, -x.cfg.tol.surplus_slope, false, "min slope in " + where)};
}

Check effort_ordering(const Subject& x) {
    double worst = kInf;
    double at = 0.0;
    for (double t : interior_grid(x.s, x.cfg.theta_points)) {
        double wps = 0, wpb = 0, sps = 0, spb = 0;
        check(coa_efforts(kWp, share(kWp, x.d, t, x.cfg).alpha, t, t, &wps, &wpb));
        check(coa_efforts(kSp, share(kSp, x.d, t, x.cfg).alpha, t, t, &sps, &spb));
        const double m = std::min({wpb - wps, sps - spb, wpb - spb, sps - wps});
        if (m < worst) {
            worst = m;
            at = t;
        }
    }
    return above("effort_ordering", worst, x.cfg.tol.effort_margin, true, sfmt("smallest margin at %.6g", at));
}

Check revenue_ranking(const Subject& x) {
    double worst = kInf;
    int worst_n = 0;
    for (int n : x.cfg.bidder_counts) {
        const double sp = expected_max(kSp, x.d, n, x.cfg);
        const double wp = expected_max(kWp, x.d, n, x.cfg);
        const double ratio = (sp - wp) / (x.cfg.solver.quad_rel_tol * std::max(std::abs(sp), std::abs(wp)));
        if (ratio < worst) {
            worst = ratio;
            worst_n = n;
        }
    }
    return above("revenue_ranking", worst, x.cfg.tol.ranking_factor, true,
                 sfmt("gap in quadrature tolerances, tightest at n=%d", worst_n));
}

std::vector<Check> clock_auction(const Subject& x) {
    const ExperimentConfig& cfg = x.cfg;
    std::vector<Check> out;

    const MarketHandle wp = make_market(cfg, duopoly(x.spec.name), kWp, true);
    const coa_auction_config base = auction_config(cfg, cfg.auction.epsilon);
    coa_equivalence eq;
    check(coa_revenue_equivalence(wp.get(), &base, cfg.draws, cfg.seed, COA_EVAL_CACHED, &eq));
    out.push_back(at_most("clock_wp_identity", eq.max_abs_difference, cfg.tol.equivalence,
                          sfmt("max per-draw revenue difference over %lld draws", static_cast<long long>(cfg.draws))));

    const MarketHandle sp = make_market(cfg, duopoly(x.spec.name), kSp, true);
    const std::vector<double>& eps = cfg.auction.epsilon_sweep;
    std::vector<coa_equivalence> reps(eps.size());
    std::vector<coa_estimate> drops(eps.size() > 1 ? eps.size() - 1 : 1);
    int monotone = 0;
    double margin = 0.0;
    check(coa_epsilon_sweep(sp.get(), eps.data(), eps.size(), cfg.draws, cfg.seed, COA_EVAL_CACHED, reps.data(),
                            drops.data(), &monotone, &margin));
    Check c = above("clock_sp_convergence", margin, -cfg.tol.se_multiple, false,
                    "smallest gap drop in paired standard errors");
    if (eps.size() < 2) c.detail = "single epsilon, nothing to compare";
    out.push_back(c);

    double worst = -kInf;
    for (const coa_mode mode : {kWp, kSp}) {
        const MarketHandle m = make_market(cfg, duopoly(x.spec.name), mode, false);
        for (std::uint64_t draw = 0; draw < 5; ++draw) {
            double types[2];
            check(coa_market_sample_types(m.get(), cfg.seed, draw, types, 2));
            for (int i = 0; i < 2; ++i) {
                double lo = 0.0;
                double hi = 0.0;
                check(coa_market_phi(m.get(), static_cast<std::size_t>(i), x.s.lo, COA_EVAL_EXACT, &lo));
                check(coa_market_phi(m.get(), static_cast<std::size_t>(i), x.s.hi, COA_EVAL_EXACT, &hi));
                hi *= 1.2;
                const int n = cfg.auction.probe_points;
                for (int k = 0; k < n; ++k) {
                    double delta = 0.0;
                    check(coa_deviation_probe(m.get(), types, 2, i + 1, lo + (hi - lo) * k / (n - 1), &base,
                                              COA_EVAL_EXACT, &delta));
                    worst = std::max(worst, delta);
                }
            }
        }
    }
    out.push_back(at_most("clock_deviation", worst, cfg.tol.ic_gain, "max gain from a non-truthful exit price"));
    return out;
}

Check zeta_star(const Subject& x) {
    double worst = 0.0;
    std::string detail;
    for (int n : x.cfg.bidder_counts) {
        double best = -kInf;
        double arg = 0.0;
        for (double z : zeta_grid(x.cfg.zeta.step)) {
            const double v = expected_max({COA_NESTED, z}, x.d, n, x.cfg);
            if (v > best) {
                best = v;
                arg = z;
            }
        }
        worst = std::max(worst, arg);
        detail += sfmt("%sn=%d:%.4g", detail.empty() ? "argmax zeta " : " ", n, arg);
    }
    return at_most("zeta_star", worst, 0.5, detail);
}

} // namespace

bool cmd_alpha_curve(const ExperimentConfig& cfg, OutputSet& out, std::ostream& log) {
    Table t("alpha_curve.csv",
            {"distribution", "theta", "alpha_wp", "alpha_sp", "branch_sp", "theta_c", "pooling", "phi_wp", "phi_sp"});
    bool ok = true;
    for (const DistributionSpec& spec : cfg.distributions) {
        const DistHandle d = make_distribution(spec);
        double tc = 0.0;
        check(coa_theta_c(d.get(), &cfg.solver, &tc));
        double worst = kInf;
        int pooled = 0;
        for (double theta : closed_grid(support(d.get()), cfg.theta_points)) {
            const coa_sharing wp = share(kWp, d.get(), theta, cfg);
            const coa_sharing sp = share(kSp, d.get(), theta, cfg);
            const bool pooling = theta <= tc;
            pooled += pooling ? 1 : 0;
            if (theta > 0.0) worst = std::min(worst, sp.alpha - wp.alpha);
            t.add({spec.name, num(theta), num(wp.alpha), num(sp.alpha), coa_branch_name(sp.branch), num(tc),
                   pooling ? "1" : "0", num(phi(kWp, d.get(), theta, cfg)), num(phi(kSp, d.get(), theta, cfg))});
        }
        const bool pass = worst >= -cfg.tol.ordering;
        ok = ok && pass;
        log << sfmt("%-20s theta_c %-10.6g pooling points %4d  min(alpha_sp - alpha_wp) %-11.4g %s\n",
                    spec.name.c_str(), tc, pooled, worst, verdict(pass));
    }
    out.csv(t);
    out.plot(t, "alpha_curve.dat", 0);
    return ok;
}

bool cmd_verify(const ExperimentConfig& cfg, OutputSet& out, std::ostream& log) {
    Table t("verify.csv", {"check", "distribution", "verdict", "statistic", "bound", "worst_margin", "detail"});
    bool ok = true;
    log << sfmt("%-22s %-20s %-6s %-12s %-12s %9s  %s\n", "check", "distribution", "result", "statistic", "bound",
                "seconds", "detail");
    for (const DistributionSpec& spec : cfg.distributions) {
        const DistHandle d = make_distribution(spec);
        const Subject x{cfg, spec, d.get(), support(d.get())};
        const std::vector<std::function<std::vector<Check>()>> suites{
            [&] { return std::vector<Check>{stationarity(x)}; },
            [&] { return std::vector<Check>{sharing_dominance(x)}; },
            [&] { return std::vector<Check>{sharing_shape(x)}; },
            [&] { return surplus_shape(x); },
            [&] { return std::vector<Check>{effort_ordering(x)}; },
            [&] { return std::vector<Check>{revenue_ranking(x)}; },
            [&] { return clock_auction(x); },
            [&] { return std::vector<Check>{zeta_star(x)}; },
        };
        for (const auto& suite : suites) {
            const auto t0 = Clock::now();
            const std::vector<Check> checks = suite();
            const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
            for (const Check& c : checks) {
                ok = ok && c.pass;
                t.add({c.name, spec.name, verdict(c.pass), num(c.statistic), num(c.bound), num(c.margin), c.detail});
                log << sfmt("%-22s %-20s %-6s %-12.4g %-12.4g %9.3f  %s\n", c.name.c_str(), spec.name.c_str(),
                            verdict(c.pass), c.statistic, c.bound, seconds / static_cast<double>(checks.size()),
                            c.detail.c_str());
            }
            log.flush();
        }
    }
    out.csv(t);
    return ok;
}

bool cmd_simulate(const ExperimentConfig& cfg, OutputSet& out, std::ostream& log) {
    const coa_mode mode = cfg.auction.mode.api();
    const MarketHandle m = make_market(cfg, cfg.bidders, mode, true);
    const std::size_t n = cfg.bidders.size();
    const coa_auction_config ac = auction_config(cfg, cfg.auction.epsilon);
    coa_auction* raw_auction = nullptr;
    check(coa_auction_create(m.get(), &ac, &raw_auction));
    const AuctionHandle auction(raw_auction);

    std::vector<std::string> cols{"draw"};
    for (const auto& b : cfg.bidders) cols.push_back("type_" + std::to_string(b.id));
    for (const char* c : {"direct_winner", "auction_winner", "exit_order", "exit_prices", "clock_start",
                          "price_runner_up", "price_winner", "contract_alpha", "alpha_clamped", "contract_cash",
                          "posterior_type", "pivot_type", "effort_seller", "effort_winner", "realized_value",
                          "winner_payoff", "auction_revenue", "direct_revenue", "revenue_diff"})
        cols.emplace_back(c);
    Table tr("simulate_transcripts.csv", cols);

    std::vector<double> types(n);
    std::vector<double> exits(n);
    std::vector<int> order(n);
    for (std::int64_t k = 0; k < cfg.draws; ++k) {
        const auto draw = static_cast<std::uint64_t>(k);
        check(coa_market_sample_types(m.get(), cfg.seed, draw, types.data(), n));
        const std::uint64_t tie = coa_draw_seed(cfg.seed, draw);
        coa_direct_outcome dir;
        check(coa_run_direct(m.get(), types.data(), n, tie, COA_EVAL_CACHED, &dir));
        coa_auction_outcome a;
        check(coa_auction_run(auction.get(), types.data(), n, tie, COA_EVAL_CACHED, &a, exits.data(), order.data()));
        std::vector<std::string> row{std::to_string(k)};
        for (double v : types) row.push_back(num(v));
        for (const std::string& s :
             {std::to_string(dir.winner_id), std::to_string(a.winner_id), joined(order), joined(exits),
              num(a.clock_start), num(a.price_runner_up), num(a.price_winner), num(a.contract_alpha),
              std::to_string(a.alpha_clamped), num(a.contract_cash), num(a.posterior_type), num(a.pivot_type),
              num(a.effort_seller), num(a.effort_winner), num(a.realized_value), num(a.winner_payoff),
              num(a.seller_revenue), num(dir.seller_revenue), num(dir.seller_revenue - a.seller_revenue)})
            row.push_back(s);
        tr.add(std::move(row));
    }

    coa_equivalence eq;
    check(coa_revenue_equivalence(m.get(), &ac, cfg.draws, cfg.seed, COA_EVAL_CACHED, &eq));
    double bound = 0.0;
    check(coa_market_expected_max_phi(m.get(), COA_EVAL_EXACT, &bound));

    const double z = eq.difference.std_error > 0.0 ? eq.difference.mean / eq.difference.std_error : 0.0;
    bool ok = true;
    std::string rule;
    if (mode.kind == COA_WINNER_PIVOTAL) {
        // Revenues agree draw by draw, so the paired differences are rounding
        // residue and their standard error says nothing; z is informational.
        ok = eq.max_abs_difference <= cfg.tol.equivalence;
        rule = sfmt("per-draw |direct - auction| <= %.3g", cfg.tol.equivalence);
    }

    Table sm("simulate_summary.csv", {"metric", "value"});
    const auto add = [&](const char* k, const std::string& v) { sm.add({k, v}); };
    add("mode", cfg.auction.mode.label());
    add("bidders", std::to_string(n));
    add("draws", std::to_string(cfg.draws));
    add("seed", std::to_string(cfg.seed));
    add("epsilon", mode.kind == COA_SELLER_PIVOTAL ? num(cfg.auction.epsilon) : "0");
    add("auction_revenue_mean", num(eq.auction.mean));
    add("auction_revenue_se", num(eq.auction.std_error));
    add("direct_revenue_mean", num(eq.direct.mean));
    add("direct_revenue_se", num(eq.direct.std_error));
    add("paired_diff_mean", num(eq.difference.mean));
    add("paired_diff_se", num(eq.difference.std_error));
    add("paired_diff_z", num(z));
    add("max_abs_diff", num(eq.max_abs_difference));
    add("clamped_draws", std::to_string(eq.clamped_draws));
    add("expected_max_phi", num(bound));

    log << sfmt("mode %s, %zu bidders, %lld draws, seed %llu\n", cfg.auction.mode.label().c_str(), n,
                static_cast<long long>(cfg.draws), static_cast<unsigned long long>(cfg.seed));
    log << sfmt("  auction revenue  %.6f +- %.6f\n", eq.auction.mean, eq.auction.std_error);
    log << sfmt("  direct revenue   %.6f +- %.6f  (optimum E[max phi] %.6f)\n", eq.direct.mean, eq.direct.std_error,
                bound);
    log << sfmt("  paired diff      %.3g +- %.3g  (max |diff| %.3g)\n", eq.difference.mean, eq.difference.std_error,
                eq.max_abs_difference);

    if (mode.kind == COA_SELLER_PIVOTAL) {
        const std::vector<double>& eps = cfg.auction.epsilon_sweep;
        std::vector<coa_equivalence> reps(eps.size());
        std::vector<coa_estimate> drops(eps.size() > 1 ? eps.size() - 1 : 1);
        int monotone = 0;
        double margin = 0.0;
        check(coa_epsilon_sweep(m.get(), eps.data(), eps.size(), cfg.draws, cfg.seed, COA_EVAL_CACHED, reps.data(),
                                drops.data(), &monotone, &margin));
        Table et("simulate_epsilon.csv", {"epsilon", "auction_revenue_mean", "auction_revenue_se", "gap_mean", "gap_se",
                                          "gap_drop_mean", "gap_drop_se", "clamped_draws"});
        log << sfmt("  %-10s %-12s %-12s %-12s\n", "epsilon", "gap", "gap se", "drop/se");
        for (std::size_t k = 0; k < reps.size(); ++k) {
            const bool has_drop = k + 1 < reps.size();
            et.add({num(reps[k].epsilon), num(reps[k].auction.mean), num(reps[k].auction.std_error),
                    num(reps[k].difference.mean), num(reps[k].difference.std_error),
                    has_drop ? num(drops[k].mean) : "", has_drop ? num(drops[k].std_error) : "",
                    std::to_string(reps[k].clamped_draws)});
            log << sfmt("  %-10.3g %-12.4g %-12.4g %s\n", reps[k].epsilon, reps[k].difference.mean,
                        reps[k].difference.std_error,
                        has_drop && drops[k].std_error > 0.0 ? sfmt("%.3g", drops[k].mean / drops[k].std_error).c_str()
                                                             : "-");
        }
        const bool not_above = eq.difference.mean >= -cfg.tol.se_multiple * eq.difference.std_error;
        ok = monotone != 0 && not_above;
        rule = sfmt("gap shrinks with epsilon within %.3g paired SE and auction revenue does not exceed the optimum",
                    cfg.tol.se_multiple);
        out.csv(et);
    }
    add("rule", rule);
    add("verdict", verdict(ok));
    log << "  " << verdict(ok) << ": " << rule << '\n';
    out.csv(tr);
    out.csv(sm);
    return ok;
}

bool cmd_zeta_sweep(const ExperimentConfig& cfg, OutputSet& out, std::ostream& log) {
    Table sweep("zeta_sweep.csv", {"distribution", "bidders", "zeta", "expected_max_phi"});
    Table star("zeta_star.csv", {"distribution", "bidders", "zeta_star", "expected_max_phi", "verdict"});
    const std::vector<double> grid = zeta_grid(cfg.zeta.step);
    bool ok = true;
    for (const DistributionSpec& spec : cfg.distributions) {
        const DistHandle d = make_distribution(spec);
        for (int n : cfg.bidder_counts) {
            double best = -kInf;
            double arg = 0.0;
            for (double z : grid) {
                const double v = expected_max({COA_NESTED, z}, d.get(), n, cfg);
                sweep.add({spec.name, std::to_string(n), num(z), num(v)});
                if (v > best) {
                    best = v;
                    arg = z;
                }
            }
            const bool pass = arg <= 0.5;
            ok = ok && pass;
            star.add({spec.name, std::to_string(n), num(arg), num(best), verdict(pass)});
            log << sfmt("%-20s n=%-3d zeta* %-8.4g E[max phi] %-12.8f %s\n", spec.name.c_str(), n, arg, best,
                        verdict(pass));
        }
    }
    out.csv(sweep);
    out.csv(star);
    out.plot(sweep, "zeta_sweep.dat", 0);
    return ok;
}

bool cmd_ic_audit(const ExperimentConfig& cfg, OutputSet& out, std::ostream& log) {
    Table gains_t("ic_audit.csv", {"mode", "bidder_id", "true_theta", "report", "gain"});
    Table sum("ic_audit_summary.csv",
              {"mode", "bidder_id", "check", "true_theta", "statistic", "bound", "argmax_report", "verdict"});
    bool ok = true;
    for (const ModeSpec& mode : cfg.ic_audit.modes) {
        const MarketHandle m = make_market(cfg, cfg.bidders, mode.api(), false);
        double worst_gain = -kInf;
        double worst_ir = 0.0;
        for (const BidderSpec& b : cfg.bidders) {
            const DistHandle d = make_distribution(cfg.distribution(b.distribution));
            const Support s = support(d.get());
            const std::vector<double> reports = closed_grid(s, cfg.ic_audit.report_points);
            std::vector<double> gains(reports.size());
            for (double u : cfg.ic_audit.quantiles) {
                double theta = 0.0;
                check(coa_dist_quantile(d.get(), u, &theta));
                coa_audit_summary a;
                check(coa_ic_audit(m.get(), b.id, theta, reports.data(), reports.size(), gains.data(), &a));
                for (std::size_t k = 0; k < reports.size(); ++k)
                    gains_t.add({mode.label(), std::to_string(b.id), num(theta), num(reports[k]), num(gains[k])});
                const bool pass = a.max_gain <= cfg.tol.ic_gain;
                ok = ok && pass;
                worst_gain = std::max(worst_gain, a.max_gain);
                sum.add({mode.label(), std::to_string(b.id), "misreport_gain", num(theta), num(a.max_gain),
                         num(cfg.tol.ic_gain), num(a.argmax_report), verdict(pass)});
            }
            double u_lo = 0.0;
            check(coa_interim_payoff(m.get(), b.id, s.lo, &u_lo));
            const bool pass = std::abs(u_lo) <= cfg.tol.participation;
            ok = ok && pass;
            worst_ir = std::max(worst_ir, std::abs(u_lo));
            sum.add({mode.label(), std::to_string(b.id), "participation", num(s.lo), num(std::abs(u_lo)),
                     num(cfg.tol.participation), "", verdict(pass)});
        }
        log << sfmt("%-22s max misreport gain %-11.4g max |U(lowest type)| %-11.4g %s\n", mode.label().c_str(),
                    worst_gain, worst_ir,
                    verdict(worst_gain <= cfg.tol.ic_gain && worst_ir <= cfg.tol.participation));
    }
    out.csv(gains_t);
    out.csv(sum);
    return ok;
}

} // namespace cli
