// SPDX-License-Identifier: MIT
#include "config.hpp"

#include "output.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace cli {

namespace {

class Reader {
public:
    explicit Reader(std::string path) : path_(std::move(path)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& where, const std::string& msg) const {
        std::ostringstream os;
        os << path_;
        if (at.IsDefined() && at.Mark().line >= 0) os << ':' << at.Mark().line + 1 << ':' << at.Mark().column + 1;
        os << ": " << where << ": " << msg;
        throw ConfigError(os.str());
    }

    void keys(const YAML::Node& map, const std::string& where, const std::set<std::string>& allowed) const {
        if (!map.IsMap()) fail(map, where, "expected a table");
        for (const auto& kv : map) {
            const auto key = kv.first.as<std::string>();
            if (allowed.count(key) == 0) fail(kv.first, where, "unknown key '" + key + "'");
        }
    }

    template <class T>
    T get(const YAML::Node& n, const std::string& where) const {
        if (!n.IsScalar()) fail(n, where, "expected a scalar value");
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            fail(n, where, "cannot read '" + n.Scalar() + "' as the expected type");
        }
    }

    double finite(const YAML::Node& n, const std::string& where) const {
        const auto v = get<double>(n, where);
        if (!std::isfinite(v)) fail(n, where, "must be finite");
        return v;
    }

    double positive(const YAML::Node& n, const std::string& where) const {
        const double v = finite(n, where);
        if (!(v > 0.0)) fail(n, where, "must be positive");
        return v;
    }

    template <class T>
    T at_least(const YAML::Node& n, const std::string& where, T floor) const {
        const auto v = get<T>(n, where);
        if (v < floor) fail(n, where, "must be at least " + std::to_string(floor));
        return v;
    }

    std::vector<double> list(const YAML::Node& n, const std::string& where) const {
        if (!n.IsSequence() || n.size() == 0) fail(n, where, "expected a non-empty list");
        std::vector<double> out;
        for (std::size_t i = 0; i < n.size(); ++i) out.push_back(finite(n[i], where + "[" + std::to_string(i) + "]"));
        return out;
    }

    ModeSpec mode(const YAML::Node& n, const std::string& where) const {
        ModeSpec m;
        std::string kind;
        if (n.IsScalar()) {
            kind = n.Scalar();
        } else {
            keys(n, where, {"kind", "zeta"});
            if (!n["kind"]) fail(n, where, "missing 'kind'");
            kind = get<std::string>(n["kind"], where + ".kind");
            if (n["zeta"]) {
                if (kind != "nested") fail(n["zeta"], where + ".zeta", "only nested modes take zeta");
                m.zeta = finite(n["zeta"], where + ".zeta");
                if (m.zeta < 0.0 || m.zeta > 1.0) fail(n["zeta"], where + ".zeta", "must lie in [0, 1]");
            }
        }
        if (kind == "winner_pivotal") {
            m.kind = COA_WINNER_PIVOTAL;
        } else if (kind == "seller_pivotal") {
            m.kind = COA_SELLER_PIVOTAL;
        } else if (kind == "effort_substitution") {
            m.kind = COA_EFFORT_SUBSTITUTION;
        } else if (kind == "nested") {
            if (!n.IsMap() || !n["zeta"]) fail(n, where, "nested modes need a zeta: {kind: nested, zeta: 0.5}");
            m.kind = COA_NESTED;
        } else {
            fail(n, where, "unknown mode '" + kind + "'");
        }
        return m;
    }

    std::vector<ModeSpec> modes(const YAML::Node& n, const std::string& where) const {
        if (!n.IsSequence() || n.size() == 0) fail(n, where, "expected a non-empty list of modes");
        std::vector<ModeSpec> out;
        for (std::size_t i = 0; i < n.size(); ++i) out.push_back(mode(n[i], where + "[" + std::to_string(i) + "]"));
        return out;
    }

private:
    std::string path_;
};

DistributionSpec read_distribution(const Reader& r, const YAML::Node& n, const std::string& where) {
    if (!n.IsMap()) r.fail(n, where, "expected a table");
    if (!n["name"] || !n["family"]) r.fail(n, where, "'name' and 'family' are required");
    DistributionSpec d;
    d.name = r.get<std::string>(n["name"], where + ".name");
    d.family = r.get<std::string>(n["family"], where + ".family");
    std::set<std::string> allowed{"name", "family", "lo", "hi"};
    std::vector<std::string> params;
    if (d.family == "truncated_exponential") {
        params = {"rate"};
    } else if (d.family == "truncated_normal") {
        params = {"mu", "sigma"};
    } else if (d.family == "power") {
        params = {"k"};
    } else if (d.family != "uniform") {
        r.fail(n["family"], where + ".family",
               "unknown family '" + d.family + "' (uniform, truncated_exponential, truncated_normal, power)");
    }
    allowed.insert(params.begin(), params.end());
    r.keys(n, where, allowed);
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!n[params[i]]) r.fail(n, where, "family '" + d.family + "' needs '" + params[i] + "'");
        const double v = r.finite(n[params[i]], where + "." + params[i]);
        (i == 0 ? d.p1 : d.p2) = v;
    }
    if (n["lo"]) d.lo = r.finite(n["lo"], where + ".lo");
    if (n["hi"]) d.hi = r.finite(n["hi"], where + ".hi");

    try {
        const DistHandle h = make_distribution(d);
        coa_check checks[16];
        std::size_t count = 0;
        int all_pass = 0;
        check(coa_dist_validate(h.get(), checks, 16, &count, &all_pass));
        if (!all_pass) {
            std::string failed;
            for (std::size_t i = 0; i < std::min<std::size_t>(count, 16); ++i)
                if (!checks[i].pass) failed += std::string(failed.empty() ? "" : ", ") + checks[i].name;
            r.fail(n, where, "distribution '" + d.name + "' fails validation: " + failed);
        }
    } catch (const ApiError& e) {
        r.fail(n, where, e.what());
    }
    return d;
}

void check_override(bool ok, const char* flag, const std::string& msg) {
    if (!ok) throw ConfigError(std::string(flag) + ": " + msg);
}

} // namespace

std::string ModeSpec::label() const {
    switch (kind) {
    case COA_WINNER_PIVOTAL: return "winner_pivotal";
    case COA_SELLER_PIVOTAL: return "seller_pivotal";
    case COA_EFFORT_SUBSTITUTION: return "effort_substitution";
    case COA_NESTED: {
        char buf[48];
        std::snprintf(buf, sizeof buf, "nested(%.6g)", zeta);
        return buf;
    }
    }
    return "unknown";
}

const DistributionSpec& ExperimentConfig::distribution(const std::string& name) const {
    for (const auto& d : distributions)
        if (d.name == name) return d;
    throw ConfigError("unknown distribution '" + name + "'");
}

DistHandle make_distribution(const DistributionSpec& spec) {
    coa_family family = COA_UNIFORM;
    if (spec.family == "truncated_exponential") family = COA_TRUNCATED_EXPONENTIAL;
    if (spec.family == "truncated_normal") family = COA_TRUNCATED_NORMAL;
    if (spec.family == "power") family = COA_POWER;
    coa_dist* raw = nullptr;
    check(coa_dist_create(family, spec.p1, spec.p2, spec.lo, spec.hi, &raw));
    return DistHandle(raw);
}

ExperimentConfig load_config(const std::string& path, const Overrides& ov) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path);
    } catch (const YAML::BadFile&) {
        throw ConfigError(path + ": cannot open config file");
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << path << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": parse error: " << e.msg;
        throw ConfigError(os.str());
    }
    const Reader r(path);
    if (!root.IsMap()) r.fail(root, "document", "expected a top-level table");
    r.keys(root, "document",
           {"distributions", "bidders", "modes", "grid", "solver", "tolerances", "monte_carlo", "auction", "ic_audit",
            "zeta", "bidder_counts", "output_dir"});

    ExperimentConfig cfg;
    coa_solver_config_default(&cfg.solver);
    cfg.modes = {{COA_WINNER_PIVOTAL, 0.0},
                 {COA_SELLER_PIVOTAL, 0.0},
                 {COA_EFFORT_SUBSTITUTION, 0.0},
                 {COA_NESTED, 0.25},
                 {COA_NESTED, 0.5}};
    cfg.ic_audit.modes = {{COA_WINNER_PIVOTAL, 0.0}, {COA_SELLER_PIVOTAL, 0.0}, {COA_EFFORT_SUBSTITUTION, 0.0}};

    const YAML::Node dists = root["distributions"];
    if (!dists || !dists.IsSequence() || dists.size() == 0)
        r.fail(dists ? dists : root, "distributions", "a non-empty list of distributions is required");
    std::set<std::string> names;
    for (std::size_t i = 0; i < dists.size(); ++i) {
        const std::string where = "distributions[" + std::to_string(i) + "]";
        DistributionSpec d = read_distribution(r, dists[i], where);
        if (!names.insert(d.name).second) r.fail(dists[i], where, "duplicate distribution name '" + d.name + "'");
        cfg.distributions.push_back(std::move(d));
    }

    if (const YAML::Node b = root["bidders"]) {
        if (!b.IsSequence() || b.size() == 0) r.fail(b, "bidders", "expected a non-empty list");
        std::set<int> ids;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const std::string where = "bidders[" + std::to_string(i) + "]";
            r.keys(b[i], where, {"id", "distribution"});
            if (!b[i]["id"] || !b[i]["distribution"]) r.fail(b[i], where, "'id' and 'distribution' are required");
            BidderSpec s{r.get<int>(b[i]["id"], where + ".id"),
                         r.get<std::string>(b[i]["distribution"], where + ".distribution")};
            if (names.count(s.distribution) == 0)
                r.fail(b[i]["distribution"], where + ".distribution", "unknown distribution '" + s.distribution + "'");
            if (!ids.insert(s.id).second) r.fail(b[i]["id"], where + ".id", "duplicate bidder id");
            cfg.bidders.push_back(s);
        }
    } else {
        int id = 1;
        for (const auto& d : cfg.distributions) cfg.bidders.push_back({id++, d.name});
    }

    if (const YAML::Node m = root["modes"]) cfg.modes = r.modes(m, "modes");

    if (const YAML::Node g = root["grid"]) {
        r.keys(g, "grid", {"theta_points"});
        if (g["theta_points"]) {
            cfg.theta_points = r.get<int>(g["theta_points"], "grid.theta_points");
            if (cfg.theta_points < 2)
                r.fail(g["theta_points"], "grid.theta_points",
                       "the theta grid is empty; at least 2 points are required, got " + std::to_string(cfg.theta_points));
        }
    }

    if (const YAML::Node s = root["solver"]) {
        r.keys(s, "solver", {"root_abs_tol", "root_max_iter", "quad_rel_tol", "quad_max_depth", "nested_grid"});
        if (s["root_abs_tol"]) cfg.solver.root_abs_tol = r.positive(s["root_abs_tol"], "solver.root_abs_tol");
        if (s["root_max_iter"]) cfg.solver.root_max_iter = r.at_least(s["root_max_iter"], "solver.root_max_iter", 1);
        if (s["quad_rel_tol"]) cfg.solver.quad_rel_tol = r.positive(s["quad_rel_tol"], "solver.quad_rel_tol");
        if (s["quad_max_depth"])
            cfg.solver.quad_max_depth = r.at_least(s["quad_max_depth"], "solver.quad_max_depth", 1);
        if (s["nested_grid"]) cfg.solver.nested_grid = r.at_least(s["nested_grid"], "solver.nested_grid", 3);
    }

    if (const YAML::Node t = root["tolerances"]) {
        r.keys(t, "tolerances",
               {"stationarity", "ordering", "effort_margin", "surplus_value", "surplus_slope", "ranking_factor",
                "equivalence", "se_multiple", "ic_gain", "participation"});
        const std::pair<const char*, double*> fields[] = {
            {"stationarity", &cfg.tol.stationarity},   {"ordering", &cfg.tol.ordering},
            {"effort_margin", &cfg.tol.effort_margin}, {"surplus_value", &cfg.tol.surplus_value},
            {"surplus_slope", &cfg.tol.surplus_slope}, {"ranking_factor", &cfg.tol.ranking_factor},
            {"equivalence", &cfg.tol.equivalence},     {"se_multiple", &cfg.tol.se_multiple},
            {"ic_gain", &cfg.tol.ic_gain},             {"participation", &cfg.tol.participation}};
        for (const auto& [key, dst] : fields)
            if (t[key]) *dst = r.positive(t[key], std::string("tolerances.") + key);
    }

    if (const YAML::Node mc = root["monte_carlo"]) {
        r.keys(mc, "monte_carlo", {"draws", "seed"});
        if (mc["draws"]) cfg.draws = r.at_least<std::int64_t>(mc["draws"], "monte_carlo.draws", 1);
        if (mc["seed"]) cfg.seed = r.get<std::uint64_t>(mc["seed"], "monte_carlo.seed");
    }

    if (const YAML::Node a = root["auction"]) {
        r.keys(a, "auction", {"mode", "epsilon", "epsilon_sweep", "clock_resolution", "probe_points"});
        if (a["mode"]) {
            cfg.auction.mode = r.mode(a["mode"], "auction.mode");
            if (cfg.auction.mode.kind != COA_WINNER_PIVOTAL && cfg.auction.mode.kind != COA_SELLER_PIVOTAL)
                r.fail(a["mode"], "auction.mode", "the clock auction runs winner_pivotal or seller_pivotal only");
        }
        if (a["epsilon"]) cfg.auction.epsilon = r.positive(a["epsilon"], "auction.epsilon");
        if (a["epsilon_sweep"]) {
            cfg.auction.epsilon_sweep = r.list(a["epsilon_sweep"], "auction.epsilon_sweep");
            for (double e : cfg.auction.epsilon_sweep)
                if (!(e > 0.0 && e <= 0.1)) r.fail(a["epsilon_sweep"], "auction.epsilon_sweep", "values must lie in (0, 0.1]");
        }
        if (a["clock_resolution"]) cfg.auction.clock_resolution = r.positive(a["clock_resolution"], "auction.clock_resolution");
        if (a["probe_points"]) cfg.auction.probe_points = r.at_least(a["probe_points"], "auction.probe_points", 2);
        if (a["epsilon"] && cfg.auction.epsilon > 0.1) r.fail(a["epsilon"], "auction.epsilon", "must lie in (0, 0.1]");
    }

    if (const YAML::Node ic = root["ic_audit"]) {
        r.keys(ic, "ic_audit", {"modes", "report_points", "quantiles"});
        if (ic["modes"]) cfg.ic_audit.modes = r.modes(ic["modes"], "ic_audit.modes");
        if (ic["report_points"]) cfg.ic_audit.report_points = r.at_least(ic["report_points"], "ic_audit.report_points", 2);
        if (ic["quantiles"]) {
            cfg.ic_audit.quantiles = r.list(ic["quantiles"], "ic_audit.quantiles");
            for (double u : cfg.ic_audit.quantiles)
                if (u < 0.0 || u > 1.0) r.fail(ic["quantiles"], "ic_audit.quantiles", "values must lie in [0, 1]");
        }
    }

    if (const YAML::Node z = root["zeta"]) {
        r.keys(z, "zeta", {"step"});
        if (z["step"]) {
            cfg.zeta.step = r.positive(z["step"], "zeta.step");
            if (cfg.zeta.step > 1.0) r.fail(z["step"], "zeta.step", "must lie in (0, 1]");
        }
    }

    if (const YAML::Node bc = root["bidder_counts"]) {
        if (!bc.IsSequence() || bc.size() == 0) r.fail(bc, "bidder_counts", "expected a non-empty list");
        cfg.bidder_counts.clear();
        for (std::size_t i = 0; i < bc.size(); ++i)
            cfg.bidder_counts.push_back(r.at_least(bc[i], "bidder_counts[" + std::to_string(i) + "]", 1));
    }

    if (const YAML::Node o = root["output_dir"]) {
        cfg.output_dir = r.get<std::string>(o, "output_dir");
        if (cfg.output_dir.empty()) r.fail(o, "output_dir", "must not be empty");
    }

    if (ov.theta_points) cfg.theta_points = *ov.theta_points;
    if (ov.draws) cfg.draws = *ov.draws;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.output_dir) cfg.output_dir = *ov.output_dir;
    if (ov.root_tol) cfg.solver.root_abs_tol = *ov.root_tol;
    if (ov.quad_tol) cfg.solver.quad_rel_tol = *ov.quad_tol;
    if (ov.stationarity_tol) cfg.tol.stationarity = *ov.stationarity_tol;
    if (ov.zeta_step) cfg.zeta.step = *ov.zeta_step;
    if (ov.epsilon) cfg.auction.epsilon = *ov.epsilon;

    check_override(!ov.theta_points || *ov.theta_points >= 2, "--theta-points",
                   "the theta grid is empty; at least 2 points are required, got " +
                       std::to_string(ov.theta_points.value_or(0)));
    check_override(!ov.draws || *ov.draws >= 1, "--draws", "at least one Monte Carlo draw is required");
    check_override(!ov.root_tol || *ov.root_tol > 0.0, "--root-tol", "must be positive");
    check_override(!ov.quad_tol || *ov.quad_tol > 0.0, "--quad-tol", "must be positive");
    check_override(!ov.stationarity_tol || *ov.stationarity_tol > 0.0, "--stationarity-tol", "must be positive");
    check_override(!ov.zeta_step || (*ov.zeta_step > 0.0 && *ov.zeta_step <= 1.0), "--zeta-step",
                   "must lie in (0, 1]");
    check_override(!ov.epsilon || (*ov.epsilon > 0.0 && *ov.epsilon <= 0.1), "--epsilon", "must lie in (0, 0.1]");
    check_override(!ov.output_dir || !ov.output_dir->empty(), "--output-dir", "must not be empty");
    return cfg;
}

std::string canonical_text(const ExperimentConfig& c) {
    std::ostringstream os;
    for (const auto& d : c.distributions)
        os << "distribution=" << d.name << ',' << d.family << ',' << num(d.p1) << ',' << num(d.p2) << ',' << num(d.lo)
           << ',' << num(d.hi) << '\n';
    for (const auto& b : c.bidders) os << "bidder=" << b.id << ',' << b.distribution << '\n';
    for (const auto& m : c.modes) os << "mode=" << m.kind << ',' << num(m.zeta) << '\n';
    os << "theta_points=" << c.theta_points << '\n';
    os << "bidder_counts=";
    for (std::size_t i = 0; i < c.bidder_counts.size(); ++i) os << (i ? "," : "") << c.bidder_counts[i];
    os << '\n';
    os << "solver=" << num(c.solver.root_abs_tol) << ',' << c.solver.root_max_iter << ',' << num(c.solver.quad_rel_tol)
       << ',' << c.solver.quad_max_depth << ',' << c.solver.nested_grid << '\n';
    const Tolerances& t = c.tol;
    os << "tolerances=" << num(t.stationarity) << ',' << num(t.ordering) << ',' << num(t.effort_margin) << ','
       << num(t.surplus_value) << ',' << num(t.surplus_slope) << ',' << num(t.ranking_factor) << ','
       << num(t.equivalence) << ',' << num(t.se_multiple) << ',' << num(t.ic_gain) << ',' << num(t.participation)
       << '\n';
    os << "monte_carlo=" << c.draws << ',' << c.seed << '\n';
    os << "auction=" << c.auction.mode.kind << ',' << num(c.auction.epsilon) << ',' << num(c.auction.clock_resolution)
       << ',' << c.auction.probe_points;
    for (double e : c.auction.epsilon_sweep) os << ',' << num(e);
    os << '\n';
    for (const auto& m : c.ic_audit.modes) os << "ic_mode=" << m.kind << ',' << num(m.zeta) << '\n';
    os << "ic_audit=" << c.ic_audit.report_points;
    for (double u : c.ic_audit.quantiles) os << ',' << num(u);
    os << '\n';
    os << "zeta=" << num(c.zeta.step) << '\n';
    return os.str();
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

} // namespace cli
