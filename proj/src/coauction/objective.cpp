// SPDX-License-Identifier: MIT
#include "coauction/objective.hpp"

#include "coauction/error.hpp"

#include <sstream>

namespace coauction {

CollaborationMode CollaborationMode::nested(double zeta) {
    require(zeta >= 0.0 && zeta <= 1.0, ErrorCode::InvalidArgument, "zeta must lie in [0,1]");
    return {ModeKind::Nested, zeta};
}

std::string CollaborationMode::name() const {
    switch (kind) {
    case ModeKind::WinnerPivotal: return "winner_pivotal";
    case ModeKind::SellerPivotal: return "seller_pivotal";
    case ModeKind::EffortSubstitution: return "effort_substitution";
    case ModeKind::Nested: {
        std::ostringstream os;
        os << "nested(" << zeta << ")";
        return os.str();
    }
    }
    return "unknown";
}

NestedCoefficients nested_coefficients(double alpha, double zeta) {
    const double d = effort_denominator(alpha);
    const double az = 1.0 - alpha * zeta;
    NestedCoefficients c;
    c.a = zeta - zeta * zeta * (1.0 + alpha * alpha) / 2.0 + alpha * az * (1.0 - zeta * alpha * alpha) / d -
          alpha * alpha * alpha * alpha * az * az / (2.0 * d * d);
    c.b = (1.0 - alpha) * (zeta * (2.0 - zeta * (1.0 + alpha)) + alpha * az * az / d);
    c.h = (1.0 - alpha) * (1.0 - alpha) * (zeta + alpha * az / d);
    return c;
}

Coefficients coefficients(const CollaborationMode& mode, double alpha) {
    const double d = effort_denominator(alpha);
    const double a2 = alpha * alpha;
    const double a4 = a2 * a2;
    switch (mode.kind) {
    case ModeKind::WinnerPivotal:
        return {(1.0 - 2.0 * a2 * (1.0 - alpha) - a4) / (2.0 * d * d), (1.0 - alpha) * (1.0 - alpha) / d};
    case ModeKind::SellerPivotal:
        return {(2.0 * alpha * d - a4) / (2.0 * d * d), alpha * (1.0 - alpha) / d};
    case ModeKind::EffortSubstitution:
        return {0.5 + alpha - a2, 1.0 - alpha};
    case ModeKind::Nested: {
        const NestedCoefficients c = nested_coefficients(alpha, mode.zeta);
        return {c.a, c.b};
    }
    }
    return {};
}

Coefficients coefficient_slopes(const CollaborationMode& mode, double alpha) {
    const double d = effort_denominator(alpha);
    const double dd = 2.0 * alpha - 1.0;
    const double a2 = alpha * alpha;
    const double a3 = a2 * alpha;
    const double a4 = a2 * a2;
    switch (mode.kind) {
    case ModeKind::WinnerPivotal: {
        const double n = 1.0 - 2.0 * a2 + 2.0 * a3 - a4;
        const double dn = -4.0 * alpha + 6.0 * a2 - 4.0 * a3;
        const double u = 1.0 - alpha;
        return {(dn * d - 2.0 * n * dd) / (2.0 * d * d * d), (-2.0 * u * d - u * u * dd) / (d * d)};
    }
    case ModeKind::SellerPivotal: {
        const double da = (d - alpha * dd) / (d * d) - (4.0 * a3 * d - 2.0 * a4 * dd) / (2.0 * d * d * d);
        const double db = ((1.0 - 2.0 * alpha) * d - alpha * (1.0 - alpha) * dd) / (d * d);
        return {da, db};
    }
    case ModeKind::EffortSubstitution:
        return {1.0 - 2.0 * alpha, -1.0};
    case ModeKind::Nested: {
        const double z = mode.zeta;
        const double az = 1.0 - alpha * z;
        const double g = alpha * az * (1.0 - z * a2);
        const double dg = az * (1.0 - z * a2) - alpha * z * (1.0 - z * a2) - 2.0 * z * a2 * az;
        const double h = a4 * az * az;
        const double dh = 4.0 * a3 * az * az - 2.0 * z * a4 * az;
        const double da = -z * z * alpha + (dg * d - g * dd) / (d * d) - (dh * d - 2.0 * h * dd) / (2.0 * d * d * d);
        const double u = alpha * (1.0 - alpha) * az * az;
        const double du = (1.0 - 2.0 * alpha) * az * az - 2.0 * z * alpha * (1.0 - alpha) * az;
        const double db = -2.0 * z * az + (du * d - u * dd) / (d * d);
        return {da, db};
    }
    }
    return {};
}

double psi(const CollaborationMode& mode, const TypeDistribution& dist, double alpha, double theta) {
    if (theta == 0.0) return 0.0;
    const Coefficients c = coefficients(mode, alpha);
    return c.a * theta * theta - c.b * dist.inverse_hazard(theta) * theta;
}

double psi_slope(const CollaborationMode& mode, const TypeDistribution& dist, double alpha, double theta) {
    if (theta == 0.0) return 0.0;
    const Coefficients c = coefficient_slopes(mode, alpha);
    return c.a * theta * theta - c.b * dist.inverse_hazard(theta) * theta;
}

} // namespace coauction
