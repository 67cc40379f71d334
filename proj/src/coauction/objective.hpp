// SPDX-License-Identifier: MIT
#pragma once

#include "coauction/distribution.hpp"

#include <string>

namespace coauction {

enum class ModeKind { WinnerPivotal, SellerPivotal, EffortSubstitution, Nested };

struct CollaborationMode {
    ModeKind kind = ModeKind::WinnerPivotal;
    double zeta = 0.0; // meaningful for Nested only

    static CollaborationMode winner_pivotal() { return {ModeKind::WinnerPivotal, 1.0}; }
    static CollaborationMode seller_pivotal() { return {ModeKind::SellerPivotal, 0.0}; }
    static CollaborationMode effort_substitution() { return {ModeKind::EffortSubstitution, 0.0}; }
    static CollaborationMode nested(double zeta);

    std::string name() const;
};

// Objective Psi(alpha, theta) = A(alpha) theta^2 - B(alpha) rho(theta) theta.
// B(alpha) theta is also the slope of the winner's truthful payoff in its own
// type, so it doubles as the information-rent integrand.
struct Coefficients {
    double a = 0.0;
    double b = 0.0;
};

Coefficients coefficients(const CollaborationMode& mode, double alpha);
// d/d alpha of both coefficients.
Coefficients coefficient_slopes(const CollaborationMode& mode, double alpha);

struct NestedCoefficients {
    double a = 0.0;
    double b = 0.0;
    double h = 0.0;
};

NestedCoefficients nested_coefficients(double alpha, double zeta);

double psi(const CollaborationMode& mode, const TypeDistribution& dist, double alpha, double theta);
// d Psi / d alpha
double psi_slope(const CollaborationMode& mode, const TypeDistribution& dist, double alpha, double theta);

// 1 - (1 - alpha) alpha, the common denominator of the equilibrium efforts.
inline double effort_denominator(double alpha) { return 1.0 - (1.0 - alpha) * alpha; }

} // namespace coauction
