// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

namespace coauction {

enum class Family { Uniform, TruncatedExponential, TruncatedNormal, Power };

const char* family_name(Family f);

// Bidder type law on a bounded support [lo, hi]. Immutable after construction;
// every member is a pure function and safe to call concurrently.
class TypeDistribution {
public:
    static TypeDistribution uniform(double lo, double hi);
    static TypeDistribution truncated_exponential(double rate, double lo, double hi);
    static TypeDistribution truncated_normal(double mu, double sigma, double lo, double hi);
    // F(theta) = ((theta - lo) / (hi - lo))^k
    static TypeDistribution power(double k, double lo, double hi);

    Family family() const noexcept { return family_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    // First and second family parameters (rate / mu,sigma / k); unused slots are 0.
    double param1() const noexcept { return p1_; }
    double param2() const noexcept { return p2_; }

    double cdf(double theta) const;
    // 1 - F computed without cancellation near the top of the support.
    double survival(double theta) const;
    double pdf(double theta) const;
    double pdf_derivative(double theta) const;
    // rho(theta) = (1 - F) / f
    double inverse_hazard(double theta) const;
    // d rho / d theta
    double inverse_hazard_derivative(double theta) const;
    // Maps u in [0,1) to a type by inverting the cdf.
    double quantile(double u) const;

    bool same_law(const TypeDistribution& other) const noexcept;
    std::string describe() const;

private:
    TypeDistribution(Family f, double p1, double p2, double lo, double hi);
    void check_support(double theta) const;

    Family family_;
    double p1_;
    double p2_;
    double lo_;
    double hi_;
    // Family-specific constants fixed at construction.
    double norm_ = 1.0;
    double aux_ = 0.0;
};

struct AssumptionCheck {
    std::string name;
    bool pass = true;
    double worst_violation = 0.0;
    double where = 0.0;
};

struct ValidationReport {
    std::vector<AssumptionCheck> checks;
    bool all_pass() const;
};

inline constexpr int kValidationGrid = 1024;
inline constexpr double kMonotoneTol = 1e-9;

// Positive density, non-decreasing hazard rate and lo * f(lo) < 1 on a
// 1024-point grid. A zero density is admitted only at a lower bound of 0.
ValidationReport validate(const TypeDistribution& dist);

struct BidderProfile {
    int bidder_id = 0;
    TypeDistribution distribution;
};

} // namespace coauction
