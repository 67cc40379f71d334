// SPDX-License-Identifier: MIT
#include "coauction/distribution.hpp"

#include "coauction/error.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace coauction {

namespace {

constexpr double kDegenerateDensity = 1e-300;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }
double std_normal_sf(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }

// P(z1 < Z < z2) for a standard normal, taking differences in the thinner tail.
double std_normal_mass(double z1, double z2) {
    if (z1 >= 0.0) return std_normal_sf(z1) - std_normal_sf(z2);
    return std_normal_cdf(z2) - std_normal_cdf(z1);
}

} // namespace

const char* family_name(Family f) {
    switch (f) {
    case Family::Uniform: return "uniform";
    case Family::TruncatedExponential: return "truncated_exponential";
    case Family::TruncatedNormal: return "truncated_normal";
    case Family::Power: return "power";
    }
    return "unknown";
}

TypeDistribution::TypeDistribution(Family f, double p1, double p2, double lo, double hi)
    : family_(f), p1_(p1), p2_(p2), lo_(lo), hi_(hi) {
    require(std::isfinite(lo) && std::isfinite(hi), ErrorCode::InvalidArgument,
            "support bounds must be finite");
    require(lo >= 0.0, ErrorCode::InvalidArgument, "support lower bound must be >= 0");
    require(hi > lo, ErrorCode::InvalidArgument, "support upper bound must exceed the lower bound");
    const double width = hi - lo;
    switch (f) {
    case Family::Uniform:
        norm_ = 1.0 / width;
        break;
    case Family::TruncatedExponential:
        require(std::isfinite(p1) && p1 > 0.0, ErrorCode::InvalidArgument,
                "exponential rate must be positive");
        norm_ = -std::expm1(-p1 * width);
        break;
    case Family::TruncatedNormal: {
        require(std::isfinite(p1), ErrorCode::InvalidArgument, "normal mean must be finite");
        require(std::isfinite(p2) && p2 > 0.0, ErrorCode::InvalidArgument,
                "normal sigma must be positive");
        norm_ = std_normal_mass((lo - p1) / p2, (hi - p1) / p2);
        require(norm_ > 0.0, ErrorCode::DegenerateDensity, "normal truncation keeps no mass");
        aux_ = std_normal_cdf((lo - p1) / p2);
        break;
    }
    case Family::Power:
        require(std::isfinite(p1) && p1 > 0.0, ErrorCode::InvalidArgument,
                "power exponent must be positive");
        break;
    }
}

TypeDistribution TypeDistribution::uniform(double lo, double hi) {
    return TypeDistribution(Family::Uniform, 0.0, 0.0, lo, hi);
}

TypeDistribution TypeDistribution::truncated_exponential(double rate, double lo, double hi) {
    return TypeDistribution(Family::TruncatedExponential, rate, 0.0, lo, hi);
}

TypeDistribution TypeDistribution::truncated_normal(double mu, double sigma, double lo, double hi) {
    return TypeDistribution(Family::TruncatedNormal, mu, sigma, lo, hi);
}

TypeDistribution TypeDistribution::power(double k, double lo, double hi) {
    return TypeDistribution(Family::Power, k, 0.0, lo, hi);
}

void TypeDistribution::check_support(double theta) const {
    if (!(theta >= lo_ && theta <= hi_)) {
        std::ostringstream os;
        os << "type " << theta << " outside support [" << lo_ << ", " << hi_ << "]";
        fail(ErrorCode::Domain, os.str());
    }
}

double TypeDistribution::cdf(double theta) const {
    check_support(theta);
    const double width = hi_ - lo_;
    switch (family_) {
    case Family::Uniform: return (theta - lo_) / width;
    case Family::TruncatedExponential: return -std::expm1(-p1_ * (theta - lo_)) / norm_;
    case Family::TruncatedNormal:
        return std::clamp(std_normal_mass((lo_ - p1_) / p2_, (theta - p1_) / p2_) / norm_, 0.0, 1.0);
    case Family::Power: return std::pow((theta - lo_) / width, p1_);
    }
    return 0.0;
}

double TypeDistribution::survival(double theta) const {
    check_support(theta);
    const double width = hi_ - lo_;
    switch (family_) {
    case Family::Uniform: return (hi_ - theta) / width;
    case Family::TruncatedExponential:
        return std::exp(-p1_ * (theta - lo_)) * -std::expm1(-p1_ * (hi_ - theta)) / norm_;
    case Family::TruncatedNormal:
        return std::clamp(std_normal_mass((theta - p1_) / p2_, (hi_ - p1_) / p2_) / norm_, 0.0, 1.0);
    case Family::Power: {
        const double x = (theta - lo_) / width;
        if (x <= 0.0) return 1.0;
        return -std::expm1(p1_ * std::log(x));
    }
    }
    return 0.0;
}

double TypeDistribution::pdf(double theta) const {
    check_support(theta);
    const double width = hi_ - lo_;
    switch (family_) {
    case Family::Uniform: return norm_;
    case Family::TruncatedExponential: return p1_ * std::exp(-p1_ * (theta - lo_)) / norm_;
    case Family::TruncatedNormal: {
        const double z = (theta - p1_) / p2_;
        return kInvSqrt2Pi * std::exp(-0.5 * z * z) / (p2_ * norm_);
    }
    case Family::Power: {
        const double x = (theta - lo_) / width;
        return p1_ * std::pow(x, p1_ - 1.0) / width;
    }
    }
    return 0.0;
}

double TypeDistribution::pdf_derivative(double theta) const {
    const double f = pdf(theta);
    const double width = hi_ - lo_;
    switch (family_) {
    case Family::Uniform: return 0.0;
    case Family::TruncatedExponential: return -p1_ * f;
    case Family::TruncatedNormal: return -(theta - p1_) / (p2_ * p2_) * f;
    case Family::Power: {
        const double x = (theta - lo_) / width;
        if (p1_ == 1.0) return 0.0;
        return p1_ * (p1_ - 1.0) * std::pow(x, p1_ - 2.0) / (width * width);
    }
    }
    return 0.0;
}

double TypeDistribution::inverse_hazard(double theta) const {
    const double f = pdf(theta);
    if (!(f >= kDegenerateDensity)) {
        std::ostringstream os;
        os << "density " << f << " at type " << theta << " is degenerate";
        fail(ErrorCode::DegenerateDensity, os.str());
    }
    return survival(theta) / f;
}

double TypeDistribution::inverse_hazard_derivative(double theta) const {
    const double f = pdf(theta);
    if (!(f >= kDegenerateDensity)) {
        std::ostringstream os;
        os << "density " << f << " at type " << theta << " is degenerate";
        fail(ErrorCode::DegenerateDensity, os.str());
    }
    return -1.0 - survival(theta) * pdf_derivative(theta) / (f * f);
}

double TypeDistribution::quantile(double u) const {
    require(u >= 0.0 && u <= 1.0, ErrorCode::Domain, "quantile level outside [0,1]");
    const double width = hi_ - lo_;
    double theta = lo_;
    switch (family_) {
    case Family::Uniform: theta = lo_ + u * width; break;
    case Family::TruncatedExponential: theta = lo_ - std::log1p(-u * norm_) / p1_; break;
    case Family::TruncatedNormal: {
        const boost::math::normal_distribution<double> unit;
        const double level = aux_ + u * norm_;
        if (level <= 0.0) return lo_;
        if (level >= 1.0) return hi_;
        theta = p1_ + p2_ * boost::math::quantile(unit, level);
        break;
    }
    case Family::Power: theta = lo_ + width * std::pow(u, 1.0 / p1_); break;
    }
    return std::clamp(theta, lo_, hi_);
}

bool TypeDistribution::same_law(const TypeDistribution& other) const noexcept {
    return family_ == other.family_ && p1_ == other.p1_ && p2_ == other.p2_ && lo_ == other.lo_ &&
           hi_ == other.hi_;
}

std::string TypeDistribution::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << family_name(family_) << "(";
    switch (family_) {
    case Family::Uniform: break;
    case Family::TruncatedExponential: os << "rate=" << p1_ << ", "; break;
    case Family::TruncatedNormal: os << "mu=" << p1_ << ", sigma=" << p2_ << ", "; break;
    case Family::Power: os << "k=" << p1_ << ", "; break;
    }
    os << "[" << lo_ << ", " << hi_ << "])";
    return os.str();
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.pass; });
}

ValidationReport validate(const TypeDistribution& dist) {
    ValidationReport report;
    const double lo = dist.lo();
    const double hi = dist.hi();
    std::vector<double> grid(kValidationGrid);
    for (int k = 0; k < kValidationGrid; ++k)
        grid[k] = k + 1 == kValidationGrid ? hi : lo + (hi - lo) * k / (kValidationGrid - 1);

    AssumptionCheck positive{"positive_density", true, 0.0, lo};
    double min_f = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kValidationGrid; ++k) {
        if (k == 0 && lo == 0.0) continue;
        const double f = dist.pdf(grid[k]);
        if (f < min_f) {
            min_f = f;
            positive.where = grid[k];
        }
    }
    positive.pass = min_f > 0.0;
    positive.worst_violation = positive.pass ? 0.0 : -min_f;
    report.checks.push_back(positive);

    AssumptionCheck hazard{"increasing_hazard", true, 0.0, lo};
    double prev = -std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < kValidationGrid; ++k) {
        const double f = dist.pdf(grid[k]);
        const double h = f / dist.survival(grid[k]);
        if (k > 0) {
            const double drop = (prev - h) / std::max(1.0, std::abs(prev));
            if (drop > hazard.worst_violation) {
                hazard.worst_violation = drop;
                hazard.where = grid[k];
            }
        }
        prev = h;
    }
    hazard.pass = hazard.worst_violation <= kMonotoneTol;
    report.checks.push_back(hazard);

    AssumptionCheck floor{"lower_type_density_below_one", true, 0.0, lo};
    const double lf = lo * dist.pdf(lo);
    floor.pass = lf < 1.0;
    floor.worst_violation = floor.pass ? 0.0 : lf - 1.0;
    report.checks.push_back(floor);

    AssumptionCheck ends{"cdf_endpoints", true, 0.0, lo};
    const double e0 = std::abs(dist.cdf(lo));
    const double e1 = std::abs(1.0 - dist.cdf(hi));
    ends.worst_violation = std::max(e0, e1);
    ends.where = e0 >= e1 ? lo : hi;
    ends.pass = ends.worst_violation <= 1e-12;
    report.checks.push_back(ends);
    return report;
}

} // namespace coauction
