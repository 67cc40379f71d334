// SPDX-License-Identifier: MIT
#include "coauction/sharing.hpp"

#include "coauction/error.hpp"

#include <algorithm>
#include <cmath>

namespace coauction {

namespace {

constexpr double kUpperBracket = 1.0 - 1e-12;
constexpr double kTopTypeSlopeTol = 1e-8;

SharingSolution limit_at_zero() { return {1.0, Branch::LimitAtZeroType, 0.0}; }

double finest(const RootConfig& cfg) { return std::min(cfg.abs_tol, 1e-15); }

} // namespace

const char* branch_name(Branch b) {
    switch (b) {
    case Branch::Interior: return "interior";
    case Branch::CornerOne: return "corner_one";
    case Branch::CornerZero: return "corner_zero";
    case Branch::LimitAtZeroType: return "limit_at_zero";
    }
    return "unknown";
}

double winner_pivotal_floor() {
    static const double root = find_root(
        [](double a) { return ((a - 3.0) * a + 4.0) * a - 1.0; }, 0.0, 1.0, {1e-16, 200});
    return root;
}

double seller_pivotal_floor() {
    static const double root =
        find_root([](double a) { return (a * a + 1.0) * a - 1.0; }, 0.0, 1.0, {1e-16, 200});
    return root;
}

double winner_pivotal_residual(double alpha, double ratio) {
    const double num = ((alpha - 3.0) * alpha + 4.0) * alpha - 1.0;
    const double den = effort_denominator(alpha) * (1.0 - alpha * alpha);
    return num - ratio * den;
}

double seller_pivotal_residual(double alpha, double ratio) {
    const double num = (alpha * alpha + 1.0) * alpha - 1.0;
    const double den = effort_denominator(alpha) * (2.0 * alpha - 1.0);
    return num - ratio * den;
}

SharingSolution alpha_wp(const TypeDistribution& dist, double theta, const RootConfig& cfg) {
    if (theta <= 0.0) return limit_at_zero();
    const double ratio = dist.inverse_hazard(theta) / theta;
    const double lo = winner_pivotal_floor();
    auto g = [ratio](double a) { return winner_pivotal_residual(a, ratio); };
    if (g(lo) >= 0.0) return {lo, Branch::Interior, std::abs(g(lo))};
    const double hi = g(kUpperBracket) > 0.0 ? kUpperBracket : 1.0;
    const double a = find_root(g, lo, hi, cfg);
    return {a, Branch::Interior, std::abs(g(a))};
}

SharingSolution alpha_sp(const TypeDistribution& dist, double theta, const RootConfig& cfg) {
    if (theta <= 0.0) return limit_at_zero();
    const double ratio = dist.inverse_hazard(theta) / theta;
    if (ratio >= 1.0) return {1.0, Branch::CornerOne, 0.0};
    auto g = [ratio](double a) { return seller_pivotal_residual(a, ratio); };
    const double hi = g(kUpperBracket) > 0.0 ? kUpperBracket : 1.0;
    const double a = find_root(g, 2.0 / 3.0, hi, cfg);
    return {a, Branch::Interior, std::abs(g(a))};
}

SharingSolution alpha_es(const TypeDistribution& dist, double theta) {
    if (theta <= 0.0) return limit_at_zero();
    const double ratio = dist.inverse_hazard(theta) / theta;
    if (ratio >= 1.0) return {1.0, Branch::CornerOne, 0.0};
    const double a = 0.5 * (1.0 + ratio);
    return {a, Branch::Interior, std::abs(1.0 - 2.0 * a + ratio)};
}

SharingSolution alpha_nested(const TypeDistribution& dist, double theta, double zeta, int grid_n,
                             const RootConfig& cfg) {
    if (theta <= 0.0) return limit_at_zero();
    const CollaborationMode mode = CollaborationMode::nested(zeta);
    const double rt = dist.inverse_hazard(theta) * theta;
    const double t2 = theta * theta;
    auto objective = [&](double a) {
        const Coefficients c = coefficients(mode, a);
        return c.a * t2 - c.b * rt;
    };
    auto slope = [&](double a) {
        const Coefficients c = coefficient_slopes(mode, a);
        return c.a * t2 - c.b * rt;
    };

    const Maximum m = maximize_bounded(objective, 0.0, 1.0, grid_n);
    const double cell = 1.0 / (grid_n - 1);
    const double floor_value = m.value - 1e-15 * std::max(1.0, std::abs(m.value));
    if (m.arg >= 1.0 - cell && slope(1.0) >= 0.0 && objective(1.0) >= floor_value)
        return {1.0, Branch::CornerOne, 0.0};
    if (m.arg <= cell && slope(0.0) <= 0.0 && objective(0.0) >= floor_value)
        return {0.0, Branch::CornerZero, 0.0};

    // Polish the refined maximizer onto the stationary point inside its cell.
    const double lo = std::max(0.0, m.arg - cell);
    const double hi = std::min(1.0, m.arg + cell);
    double alpha = m.arg;
    if (slope(lo) > 0.0 && slope(hi) < 0.0) {
        const double root = find_root(slope, lo, hi, {finest(cfg), cfg.max_iter});
        if (objective(root) >= floor_value) alpha = root;
    }
    return {alpha, Branch::Interior, std::abs(slope(alpha))};
}

SharingSolution alpha_star(const CollaborationMode& mode, const TypeDistribution& dist, double theta,
                           const SolverConfig& cfg) {
    switch (mode.kind) {
    case ModeKind::WinnerPivotal: return alpha_wp(dist, theta, cfg.root);
    case ModeKind::SellerPivotal: return alpha_sp(dist, theta, cfg.root);
    case ModeKind::EffortSubstitution: return alpha_es(dist, theta);
    case ModeKind::Nested: return alpha_nested(dist, theta, mode.zeta, cfg.nested_grid, cfg.root);
    }
    fail(ErrorCode::Internal, "unknown collaboration mode");
}

double theta_c(const TypeDistribution& dist, const RootConfig& cfg) {
    const double lo = dist.lo();
    const double hi = dist.hi();
    auto g = [&](double t) { return dist.survival(t) - t * dist.pdf(t); };
    if (g(lo) <= 0.0) return lo;
    return find_root(g, lo, hi, {finest(cfg), cfg.max_iter});
}

ConditionReport check_prop7_conditions(const TypeDistribution& dist, double theta, double zeta, int grid_n) {
    return evaluate_conditions(dist, theta, zeta, alpha_nested(dist, theta, zeta, grid_n));
}

ConditionReport evaluate_conditions(const TypeDistribution& dist, double theta, double zeta,
                                    const SharingSolution& s) {
    ConditionReport r;
    r.theta = theta;
    r.zeta = zeta;
    r.alpha = s.alpha;
    r.branch = s.branch;
    const double h = kConditionStep;
    const NestedCoefficients up = nested_coefficients(s.alpha + h, zeta);
    const NestedCoefficients dn = nested_coefficients(s.alpha - h, zeta);
    r.d_a = (up.a - dn.a) / (2.0 * h);
    r.d_h = (up.h - dn.h) / (2.0 * h);
    r.a_negative = r.d_a < 0.0;
    r.h_negative = r.d_h < 0.0;
    r.applicable = s.branch == Branch::Interior;
    if (!r.applicable) {
        r.satisfied = true;
        return r;
    }
    // At a top type with zero inverse hazard dA/d alpha is checked weakly.
    const bool top_type = theta > 0.0 && dist.inverse_hazard(theta) == 0.0;
    const bool a_ok = r.a_negative || (top_type && std::abs(r.d_a) <= kTopTypeSlopeTol);
    r.satisfied = a_ok && r.h_negative;
    return r;
}

} // namespace coauction
