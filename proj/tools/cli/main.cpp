// SPDX-License-Identifier: MIT
// coauction-cli: experiment driver over the coauction C library.
//
// Exit status: 0 every check passed, 1 a check failed, 2 configuration or
// usage error, 3 numerical failure inside the library.
#include "commands.hpp"
#include "config.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

namespace {

enum Exit : int { kPass = 0, kCheckFailed = 1, kConfigError = 2, kNumericalError = 3 };

using Command = std::function<bool(const cli::ExperimentConfig&, cli::OutputSet&, std::ostream&)>;

int run(const std::string& name, const Command& command, const std::string& config_path, const cli::Overrides& ov) {
    cli::ExperimentConfig cfg;
    try {
        cfg = cli::load_config(config_path, ov);
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    cli::OutputSet out({name, cli::sha256_hex(cli::canonical_text(cfg))});
    bool pass = false;
    try {
        pass = command(cfg, out, std::cout);
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const cli::ApiError& e) {
        const bool config = e.status() == COA_ERR_INVALID_ARGUMENT || e.status() == COA_ERR_CONDITION_VIOLATED;
        std::cerr << (config ? "config error: " : "numerical failure: ") << e.what() << '\n';
        return config ? kConfigError : kNumericalError;
    }
    try {
        for (const std::string& f : out.write(cfg.output_dir)) std::cout << "wrote " << f << '\n';
    } catch (const std::exception& e) {
        std::cerr << "config error: output directory '" << cfg.output_dir << "': " << e.what() << '\n';
        return kConfigError;
    }
    std::cout << (pass ? "all checks passed" : "one or more checks FAILED") << " (config sha256 "
              << out.provenance().config_hash << ")\n";
    return pass ? kPass : kCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal linear-payment auctions with post-auction collaboration: curves, checks and simulations."};
    app.set_version_flag("--version", std::string(coa_version()));
    app.require_subcommand(1);

    std::string config_path;
    cli::Overrides ov;
    const std::map<std::string, std::pair<std::string, Command>> commands{
        {"alpha-curve", {"Optimal sharing rules and surpluses on a type grid", cli::cmd_alpha_curve}},
        {"verify", {"Run every check per distribution and print a verdict table", cli::cmd_verify}},
        {"simulate", {"Seeded clock-auction runs compared with the direct mechanism", cli::cmd_simulate}},
        {"zeta-sweep", {"Expected maximal surplus across interdependence levels", cli::cmd_zeta_sweep}},
        {"ic-audit", {"Misreport gains and participation for every bidder", cli::cmd_ic_audit}},
    };
    for (const auto& [name, entry] : commands) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        sub->add_option("config", config_path, "YAML experiment file")->required();
        sub->add_option("--theta-points", ov.theta_points, "Points in the type grid");
        sub->add_option("--draws", ov.draws, "Monte Carlo draws");
        sub->add_option("--seed", ov.seed, "Monte Carlo seed");
        sub->add_option("-o,--output-dir", ov.output_dir, "Directory for CSV and plot data");
        sub->add_option("--root-tol", ov.root_tol, "Absolute tolerance of the sharing-rule root finder");
        sub->add_option("--quad-tol", ov.quad_tol, "Relative tolerance of adaptive quadrature");
        sub->add_option("--stationarity-tol", ov.stationarity_tol, "Bound on first-order residuals");
        sub->add_option("--zeta-step", ov.zeta_step, "Step of the interdependence grid");
        sub->add_option("--epsilon", ov.epsilon, "Sharing-rate discount in the seller-pivotal auction");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kConfigError;
    }
    for (const auto& [name, entry] : commands)
        if (app.got_subcommand(name)) return run(name, entry.second, config_path, ov);
    return kConfigError;
}
