// SPDX-License-Identifier: MIT
#pragma once

#include "coauction/distribution.hpp"
#include "coauction/numerics.hpp"
#include "coauction/objective.hpp"

namespace coauction {

enum class Branch { Interior, CornerOne, CornerZero, LimitAtZeroType };

const char* branch_name(Branch b);

struct SharingSolution {
    double alpha = 1.0;
    Branch branch = Branch::Interior;
    // Absolute stationarity residual; 0 for corners.
    double residual = 0.0;
};

struct SolverConfig {
    RootConfig root;
    QuadConfig quad;
    int nested_grid = 2048;
};

// Real root of a^3 - 3a^2 + 4a - 1 (~0.31767).
double winner_pivotal_floor();
// Real root of a^3 + a - 1 (~0.68233).
double seller_pivotal_floor();

// Stationarity residuals in cleared-denominator form: numerator minus
// (rho/theta) times the positive denominator. Zero exactly at the optimum.
double winner_pivotal_residual(double alpha, double ratio);
double seller_pivotal_residual(double alpha, double ratio);

SharingSolution alpha_wp(const TypeDistribution& dist, double theta, const RootConfig& cfg = {});
SharingSolution alpha_sp(const TypeDistribution& dist, double theta, const RootConfig& cfg = {});
SharingSolution alpha_es(const TypeDistribution& dist, double theta);
SharingSolution alpha_nested(const TypeDistribution& dist, double theta, double zeta, int grid_n = 2048,
                             const RootConfig& cfg = {});
SharingSolution alpha_star(const CollaborationMode& mode, const TypeDistribution& dist, double theta,
                           const SolverConfig& cfg = {});

// Type at which rho(theta) / theta = 1; the lower bound when the ratio is
// already below one there.
double theta_c(const TypeDistribution& dist, const RootConfig& cfg = {});

struct ConditionReport {
    double theta = 0.0;
    double zeta = 0.0;
    double alpha = 0.0;
    Branch branch = Branch::Interior;
    double d_a = 0.0; // dA/d alpha at the maximizer
    double d_h = 0.0; // dH/d alpha at the maximizer
    bool a_negative = false;
    bool h_negative = false;
    // False at corner maximizers, where no condition is checked.
    bool applicable = false;
    bool satisfied = false;
};

inline constexpr double kConditionStep = 1e-6;

ConditionReport check_prop7_conditions(const TypeDistribution& dist, double theta, double zeta,
                                       int grid_n = 2048);
// Same report for an already solved nested share.
ConditionReport evaluate_conditions(const TypeDistribution& dist, double theta, double zeta,
                                    const SharingSolution& solution);

} // namespace coauction
