// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace coauction {

using ScalarFn = std::function<double(double)>;

struct RootConfig {
    double abs_tol = 1e-12;
    int max_iter = 200;
};

struct QuadConfig {
    double rel_tol = 1e-8;
    int max_depth = 40;
    // Floor for the absolute tolerance when the integral itself is near zero.
    double abs_floor = 1e-15;
};

struct McConfig {
    std::int64_t n_draws = 100000;
    std::uint64_t seed = 0;
};

// Bracketed root of g on [lo, hi]. Illinois false-position steps that fail to
// halve the bracket are replaced by bisection, so the bracket always shrinks.
double find_root(const ScalarFn& g, double lo, double hi, const RootConfig& cfg = {});

struct Maximum {
    double arg = 0.0;
    double value = 0.0;
};

// Grid scan of grid_n points followed by golden-section refinement around the
// best grid point. Ties resolve to the smallest argument.
Maximum maximize_bounded(const ScalarFn& h, double lo, double hi, int grid_n = 2048);

// Adaptive Simpson quadrature.
double integrate(const ScalarFn& g, double a, double b, const QuadConfig& cfg = {});

// Dense-grid argmax with no refinement; the independent oracle for solvers.
double grid_argmax_oracle(const ScalarFn& h, double lo, double hi, long n);

// Counter-based generator: every draw is a pure function of
// (seed, stream, index), so Monte Carlo sweeps can be split across workers
// without changing results.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const;
    // Uniform on [0, 1) with 53 random bits.
    double uniform(std::uint64_t stream, std::uint64_t index) const;
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

std::uint64_t mix64(std::uint64_t x);

// Running mean and standard error over a sequence consumed in index order.
struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t count = 0;
};

MeanEstimate mean_and_se(const std::vector<double>& values);

// Piecewise cubic Hermite interpolant on increasing knots. Slopes are limited
// (Fritsch-Carlson) so monotone data give a monotone interpolant.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);
    // Slopes estimated from the data when none are supplied.
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    // Smallest x with interpolant(x) == y on a non-decreasing interpolant;
    // y is clamped to the data range.
    double inverse(double y) const;

    const std::vector<double>& knots() const noexcept { return x_; }
    const std::vector<double>& values() const noexcept { return y_; }

private:
    void limit_slopes();
    std::size_t cell(double x) const;
    double eval_cell(std::size_t k, double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
};

} // namespace coauction
