// SPDX-License-Identifier: MIT
// Experiment configuration: YAML document in, validated settings out.
#pragma once

#include "api.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DistributionSpec {
    std::string name;
    std::string family;
    double p1 = 0.0;
    double p2 = 0.0;
    double lo = 0.0;
    double hi = 1.0;
};

struct ModeSpec {
    coa_mode_kind kind = COA_WINNER_PIVOTAL;
    double zeta = 0.0;

    coa_mode api() const { return {kind, zeta}; }
    std::string label() const;
};

struct BidderSpec {
    int id = 0;
    std::string distribution;
};

struct Tolerances {
    double stationarity = 1e-10;
    double ordering = 1e-9;
    double effort_margin = 1e-12;
    double surplus_value = 1e-12;
    double surplus_slope = 1e-9;
    double ranking_factor = 10.0;
    double equivalence = 1e-8;
    double se_multiple = 3.0;
    double ic_gain = 1e-9;
    double participation = 1e-9;
};

struct AuctionSettings {
    ModeSpec mode;
    double epsilon = 1e-3;
    std::vector<double> epsilon_sweep{1e-2, 1e-3, 1e-4};
    double clock_resolution = 1e-6;
    int probe_points = 41;
};

struct AuditSettings {
    std::vector<ModeSpec> modes;
    int report_points = 101;
    std::vector<double> quantiles{0.1, 0.5, 0.9};
};

struct ZetaSettings {
    double step = 0.01;
};

struct ExperimentConfig {
    std::vector<DistributionSpec> distributions;
    std::vector<BidderSpec> bidders;
    std::vector<ModeSpec> modes;
    int theta_points = 100;
    std::vector<int> bidder_counts{1, 2, 5};
    coa_solver_config solver{};
    Tolerances tol;
    std::int64_t draws = 10000;
    std::uint64_t seed = 1;
    AuctionSettings auction;
    AuditSettings ic_audit;
    ZetaSettings zeta;
    std::string output_dir = "out";

    const DistributionSpec& distribution(const std::string& name) const;
};

// Command-line values that take precedence over the file.
struct Overrides {
    std::optional<int> theta_points;
    std::optional<std::int64_t> draws;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<double> root_tol;
    std::optional<double> quad_tol;
    std::optional<double> stationarity_tol;
    std::optional<double> zeta_step;
    std::optional<double> epsilon;
};

// Throws ConfigError with file:line:column context.
ExperimentConfig load_config(const std::string& path, const Overrides& overrides);

// Stable text form of every setting that affects results; the output
// directory is excluded so relocated runs hash identically.
std::string canonical_text(const ExperimentConfig& cfg);

std::string sha256_hex(const std::string& data);

DistHandle make_distribution(const DistributionSpec& spec);

} // namespace cli
