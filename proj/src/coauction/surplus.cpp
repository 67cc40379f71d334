// SPDX-License-Identifier: MIT
#include "coauction/surplus.hpp"

#include "coauction/error.hpp"
#include "coauction/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace coauction {

namespace {

bool is_corner(Branch b) { return b == Branch::CornerOne || b == Branch::CornerZero; }

double envelope_slope(const CollaborationMode& mode, const TypeDistribution& dist, double alpha, double theta) {
    if (theta <= 0.0) return 0.0;
    const Coefficients c = coefficients(mode, alpha);
    const double rho = dist.inverse_hazard(theta);
    return 2.0 * c.a * theta - c.b * (rho + theta * dist.inverse_hazard_derivative(theta));
}

} // namespace

SurplusPoint evaluate_surplus(const CollaborationMode& mode, const TypeDistribution& dist, double theta,
                              const SolverConfig& cfg) {
    SurplusPoint out;
    out.sharing = alpha_star(mode, dist, theta, cfg);
    if (theta <= 0.0) return out;
    if (mode.kind == ModeKind::EffortSubstitution) {
        const double rho = dist.inverse_hazard(theta);
        out.phi = out.sharing.branch == Branch::Interior
                      ? 0.75 * theta * theta + 0.25 * rho * rho - 0.5 * rho * theta
                      : 0.5 * theta * theta;
        return out;
    }
    out.phi = psi(mode, dist, out.sharing.alpha, theta);
    return out;
}

double phi(const CollaborationMode& mode, const TypeDistribution& dist, double theta, const SolverConfig& cfg) {
    return evaluate_surplus(mode, dist, theta, cfg).phi;
}

double phi_slope(const CollaborationMode& mode, const TypeDistribution& dist, double theta,
                 const SolverConfig& cfg) {
    if (theta <= 0.0) return 0.0;
    return envelope_slope(mode, dist, alpha_star(mode, dist, theta, cfg).alpha, theta);
}

double phi_inverse(const CollaborationMode& mode, const TypeDistribution& dist, double p, const SolverConfig& cfg) {
    const double lo = dist.lo();
    const double hi = dist.hi();
    const double top = phi(mode, dist, hi, cfg);
    if (p >= top) return hi;
    const double bottom = phi(mode, dist, lo, cfg);
    if (p < bottom) {
        std::ostringstream os;
        os << "virtual surplus " << p << " below the floor " << bottom;
        fail(ErrorCode::Domain, os.str());
    }
    if (p == bottom) return lo;
    return find_root([&](double t) { return phi(mode, dist, t, cfg) - p; }, lo, hi, {1e-15, 400});
}

double rent_slope(const CollaborationMode& mode, const TypeDistribution& dist, double tau, double alpha_shift,
                  const SolverConfig& cfg) {
    if (tau <= 0.0) return 0.0;
    const double a = std::max(alpha_star(mode, dist, tau, cfg).alpha - alpha_shift, 0.0);
    return coefficients(mode, a).b * tau;
}

double rent_integral(const CollaborationMode& mode, const TypeDistribution& dist, double a, double b,
                     double alpha_shift, const SolverConfig& cfg) {
    return integrate([&](double t) { return rent_slope(mode, dist, t, alpha_shift, cfg); }, a, b, cfg.quad);
}

SurplusCurve::SurplusCurve(const CollaborationMode& mode, const TypeDistribution& dist, const SolverConfig& cfg,
                           std::size_t n, double alpha_shift)
    : mode_(mode), dist_(dist), shift_(alpha_shift) {
    require(n >= 3, ErrorCode::InvalidArgument, "surplus curve needs at least 3 knots");
    const double lo = dist.lo();
    const double hi = dist.hi();
    auto make_point = [&](double t) {
        const SurplusPoint sp = evaluate_surplus(mode, dist, t, cfg);
        return CurvePoint{t, sp.sharing.alpha, sp.phi, sp.sharing.branch, 0.0};
    };

    std::vector<CurvePoint> pts;
    pts.reserve(n + 4);
    for (std::size_t k = 0; k < n; ++k) pts.push_back(make_point(k + 1 == n ? hi : lo + (hi - lo) * k / (n - 1)));

    // Extra knot at each switch between a corner and an interior share.
    std::vector<CurvePoint> knots;
    knots.reserve(pts.size() + 4);
    knots.push_back(pts[0]);
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const CurvePoint& left = pts[k - 1];
        const CurvePoint& right = pts[k];
        if (left.theta > 0.0 && is_corner(left.branch) != is_corner(right.branch)) {
            double a = left.theta;
            double b = right.theta;
            const bool left_corner = is_corner(left.branch);
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                if (is_corner(alpha_star(mode, dist, m, cfg).branch) == left_corner)
                    a = m;
                else
                    b = m;
            }
            const double switch_at = left_corner ? a : b;
            if (switch_at > left.theta && switch_at < right.theta) knots.push_back(make_point(switch_at));
        }
        knots.push_back(right);
    }

    std::vector<double> x(knots.size());
    std::vector<double> phis(knots.size());
    std::vector<double> phi_slopes(knots.size());
    std::vector<double> rents(knots.size());
    std::vector<double> rent_slopes(knots.size());
    auto slope_of_rent = [&](double t) { return rent_slope(mode, dist, t, alpha_shift, cfg); };
    for (std::size_t k = 0; k < knots.size(); ++k) {
        CurvePoint& p = knots[k];
        if (k > 0) {
            p.rent = knots[k - 1].rent + integrate(slope_of_rent, knots[k - 1].theta, p.theta, cfg.quad);
        }
        x[k] = p.theta;
        phis[k] = p.phi;
        phi_slopes[k] = envelope_slope(mode, dist, p.alpha, p.theta);
        rents[k] = p.rent;
        rent_slopes[k] = p.theta > 0.0 ? coefficients(mode, std::max(p.alpha - alpha_shift, 0.0)).b * p.theta : 0.0;
    }
    points_ = std::move(knots);
    phi_fn_ = MonotoneCubic(x, phis, phi_slopes);
    rent_fn_ = MonotoneCubic(x, rents, rent_slopes);
}

double SurplusCurve::phi(double theta) const {
    require(theta >= dist_.lo() && theta <= dist_.hi(), ErrorCode::Domain, "type outside the curve support");
    return phi_fn_(theta);
}

double SurplusCurve::phi_inverse(double p) const {
    if (p >= phi_ceiling()) return dist_.hi();
    if (p < phi_floor()) {
        std::ostringstream os;
        os << "virtual surplus " << p << " below the floor " << phi_floor();
        fail(ErrorCode::Domain, os.str());
    }
    return phi_fn_.inverse(p);
}

double SurplusCurve::rent(double a, double b) const {
    require(a >= dist_.lo() && b <= dist_.hi() && a <= b, ErrorCode::Domain, "rent interval outside the support");
    return rent_fn_(b) - rent_fn_(a);
}

void SurplusCurve::write_csv(std::ostream& os) const {
    os << "theta,alpha_star,phi,branch\n";
    for (const CurvePoint& p : points_)
        os << format_number(p.theta) << ',' << format_number(p.alpha) << ',' << format_number(p.phi) << ','
           << branch_name(p.branch) << '\n';
}

} // namespace coauction
