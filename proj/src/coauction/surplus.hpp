// SPDX-License-Identifier: MIT
#pragma once

#include "coauction/distribution.hpp"
#include "coauction/numerics.hpp"
#include "coauction/objective.hpp"
#include "coauction/sharing.hpp"

#include <iosfwd>
#include <vector>

namespace coauction {

struct SurplusPoint {
    SharingSolution sharing;
    double phi = 0.0;
};

SurplusPoint evaluate_surplus(const CollaborationMode& mode, const TypeDistribution& dist, double theta,
                              const SolverConfig& cfg = {});

double phi(const CollaborationMode& mode, const TypeDistribution& dist, double theta, const SolverConfig& cfg = {});

// d phi / d theta at the optimal share (envelope form).
double phi_slope(const CollaborationMode& mode, const TypeDistribution& dist, double theta,
                 const SolverConfig& cfg = {});

// Type whose virtual surplus equals p, found by bisection on the exact phi.
// Prices above phi(hi) map to hi; prices below phi(lo) are a domain error.
double phi_inverse(const CollaborationMode& mode, const TypeDistribution& dist, double p,
                   const SolverConfig& cfg = {});

// Winner's information-rent slope B(alpha) * tau with the optimal share
// lowered by alpha_shift (clamped at 0).
double rent_slope(const CollaborationMode& mode, const TypeDistribution& dist, double tau, double alpha_shift,
                  const SolverConfig& cfg = {});

// Integral of rent_slope over [a, b].
double rent_integral(const CollaborationMode& mode, const TypeDistribution& dist, double a, double b,
                     double alpha_shift = 0.0, const SolverConfig& cfg = {});

struct CurvePoint {
    double theta = 0.0;
    double alpha = 0.0;
    double phi = 0.0;
    Branch branch = Branch::Interior;
    // Integral of the rent slope from the lower bound to theta.
    double rent = 0.0;
};

inline constexpr std::size_t kCurveSize = 512;

// Tabulated surplus curve for one (mode, distribution) pair. Knots are evenly
// spaced, with an extra knot wherever the optimal share leaves the corner.
// Interpolation is monotone cubic Hermite with exact slopes at the knots.
class SurplusCurve {
public:
    SurplusCurve(const CollaborationMode& mode, const TypeDistribution& dist, const SolverConfig& cfg = {},
                 std::size_t n = kCurveSize, double alpha_shift = 0.0);

    const CollaborationMode& mode() const noexcept { return mode_; }
    const TypeDistribution& distribution() const noexcept { return dist_; }
    const std::vector<CurvePoint>& points() const noexcept { return points_; }
    double alpha_shift() const noexcept { return shift_; }

    double phi(double theta) const;
    double phi_inverse(double p) const;
    double phi_floor() const noexcept { return points_.front().phi; }
    double phi_ceiling() const noexcept { return points_.back().phi; }
    // Integral of the rent slope over [a, b].
    double rent(double a, double b) const;

    // Columns: theta, alpha_star, phi, branch.
    void write_csv(std::ostream& os) const;

private:
    CollaborationMode mode_;
    TypeDistribution dist_;
    double shift_;
    std::vector<CurvePoint> points_;
    MonotoneCubic phi_fn_;
    MonotoneCubic rent_fn_;
};

} // namespace coauction
