// SPDX-License-Identifier: MIT
#include "coauction/numerics.hpp"

#include "coauction/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace coauction {

double find_root(const ScalarFn& g, double lo, double hi, const RootConfig& cfg) {
    require(cfg.abs_tol > 0.0 && cfg.max_iter >= 1, ErrorCode::InvalidArgument, "bad root config");
    require(lo <= hi, ErrorCode::InvalidArgument, "root bracket is reversed");
    double a = lo;
    double b = hi;
    double ga = g(a);
    double gb = g(b);
    if (ga == 0.0) return a;
    if (gb == 0.0) return b;
    if (!(ga * gb < 0.0)) {
        std::ostringstream os;
        os << "no sign change on [" << lo << ", " << hi << "]: g=" << ga << ", " << gb;
        fail(ErrorCode::Bracket, os.str());
    }

    int side = 0;
    double prev_width = b - a;
    for (int it = 0; it < cfg.max_iter; ++it) {
        const double width = b - a;
        if (width <= cfg.abs_tol) break;
        const double mid = a + 0.5 * width;
        if (mid <= a || mid >= b) break; // adjacent doubles

        double x = (a * gb - b * ga) / (gb - ga);
        const bool stalled = width > 0.5 * prev_width;
        if (!(x > a && x < b) || (stalled && it > 0)) x = mid;
        prev_width = width;

        const double gx = g(x);
        if (gx == 0.0) return x;
        if ((gx < 0.0) == (ga < 0.0)) {
            a = x;
            ga = gx;
            if (side == -1) gb *= 0.5;
            side = -1;
        } else {
            b = x;
            gb = gx;
            if (side == 1) ga *= 0.5;
            side = 1;
        }
        if (it + 1 == cfg.max_iter && b - a > cfg.abs_tol) {
            std::ostringstream os;
            os << "root finder did not converge in " << cfg.max_iter << " iterations";
            fail(ErrorCode::Convergence, os.str());
        }
    }

    // Finish with one secant step on the true values at the final bracket.
    const double fa = g(a);
    const double fb = g(b);
    double best = std::abs(fa) <= std::abs(fb) ? a : b;
    double best_g = std::min(std::abs(fa), std::abs(fb));
    if (fb != fa) {
        const double x = std::clamp((a * fb - b * fa) / (fb - fa), a, b);
        const double gx = std::abs(g(x));
        if (gx < best_g) best = x;
    }
    return best;
}

Maximum maximize_bounded(const ScalarFn& h, double lo, double hi, int grid_n) {
    require(lo < hi && grid_n >= 3, ErrorCode::InvalidArgument, "bad maximization range");
    const double step = (hi - lo) / (grid_n - 1);
    std::size_t best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    std::vector<double> vals(grid_n);
    for (int k = 0; k < grid_n; ++k) {
        const double x = k + 1 == grid_n ? hi : lo + step * k;
        vals[k] = h(x);
        if (vals[k] > best_v) {
            best_v = vals[k];
            best = k;
        }
    }
    auto node = [&](std::size_t k) { return k + 1 == static_cast<std::size_t>(grid_n) ? hi : lo + step * k; };
    Maximum out{node(best), best_v};

    // A flat neighbourhood leaves nothing to refine and keeps the smallest node.
    const std::size_t left = best == 0 ? 0 : best - 1;
    const std::size_t right = std::min<std::size_t>(best + 1, grid_n - 1);
    if (vals[left] == best_v && vals[right] == best_v) return out;

    constexpr double kInvPhi = 0.61803398874989484820;
    double a = node(left);
    double b = node(right);
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double hc = h(c);
    double hd = h(d);
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        if (hc >= hd) {
            b = d;
            d = c;
            hd = hc;
            c = b - kInvPhi * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + kInvPhi * (b - a);
            hd = h(d);
        }
    }
    const double x = 0.5 * (a + b);
    const double hx = h(x);
    const double cand[] = {c, d, x};
    const double cand_v[] = {hc, hd, hx};
    for (int i = 0; i < 3; ++i) {
        if (cand_v[i] > out.value || (cand_v[i] == out.value && cand[i] < out.arg)) {
            out.arg = cand[i];
            out.value = cand_v[i];
        }
    }
    return out;
}

namespace {

struct SimpsonState {
    const ScalarFn& g;
    int max_depth;
};

double simpson_step(const SimpsonState& st, double a, double b, double fa, double fm, double fb,
                    double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.g(lm);
    const double frm = st.g(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps || m <= a || m >= b) return left + right + delta / 15.0;
    if (depth >= st.max_depth) {
        std::ostringstream os;
        os << "adaptive quadrature exceeded depth " << st.max_depth << " near [" << a << ", " << b << "]";
        fail(ErrorCode::Convergence, os.str());
    }
    return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           simpson_step(st, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
}

} // namespace

double integrate(const ScalarFn& g, double a, double b, const QuadConfig& cfg) {
    require(cfg.rel_tol > 0.0, ErrorCode::InvalidArgument, "bad quadrature config");
    if (a == b) return 0.0;
    require(a < b, ErrorCode::InvalidArgument, "integration bounds are reversed");

    // A four-panel composite rule seeds the relative scale; the recursion then
    // runs on each panel so a single coarse panel cannot hide structure.
    constexpr int kPanels = 4;
    double x[2 * kPanels + 1];
    double f[2 * kPanels + 1];
    for (int i = 0; i <= 2 * kPanels; ++i) {
        x[i] = i == 2 * kPanels ? b : a + (b - a) * i / (2 * kPanels);
        f[i] = g(x[i]);
    }
    double coarse = 0.0;
    double scale = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        const double s = (x[2 * p + 2] - x[2 * p]) / 6.0 * (f[2 * p] + 4.0 * f[2 * p + 1] + f[2 * p + 2]);
        coarse += s;
        scale += std::abs(s);
    }
    const double eps = std::max(cfg.rel_tol * std::max(std::abs(coarse), 1e-3 * scale), cfg.abs_floor);
    const SimpsonState st{g, cfg.max_depth};
    double total = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        const double whole = (x[2 * p + 2] - x[2 * p]) / 6.0 * (f[2 * p] + 4.0 * f[2 * p + 1] + f[2 * p + 2]);
        total += simpson_step(st, x[2 * p], x[2 * p + 2], f[2 * p], f[2 * p + 1], f[2 * p + 2], whole,
                              eps / kPanels, 0);
    }
    return total;
}

double grid_argmax_oracle(const ScalarFn& h, double lo, double hi, long n) {
    require(n >= 2 && lo <= hi, ErrorCode::InvalidArgument, "bad oracle grid");
    double best_x = lo;
    double best_v = -std::numeric_limits<double>::infinity();
    for (long k = 0; k < n; ++k) {
        const double x = k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
        const double v = h(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return best_x;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t index) const {
    return mix64(mix64(seed_ ^ mix64(stream)) + index);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t index) const {
    return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
}

MeanEstimate mean_and_se(const std::vector<double>& values) {
    MeanEstimate out;
    out.count = static_cast<std::int64_t>(values.size());
    if (values.empty()) return out;
    double mean = 0.0;
    double m2 = 0.0;
    std::int64_t k = 0;
    for (double v : values) {
        ++k;
        const double d = v - mean;
        mean += d / static_cast<double>(k);
        m2 += d * (v - mean);
    }
    out.mean = mean;
    if (k > 1) out.std_error = std::sqrt(m2 / static_cast<double>(k - 1) / static_cast<double>(k));
    return out;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(slopes)) {
    require(x_.size() >= 2 && x_.size() == y_.size() && y_.size() == m_.size(), ErrorCode::InvalidArgument,
            "interpolant needs matching knots, values and slopes");
    for (std::size_t k = 1; k < x_.size(); ++k)
        require(x_[k] > x_[k - 1], ErrorCode::InvalidArgument, "interpolant knots must increase");
    limit_slopes();
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    require(x_.size() >= 2 && x_.size() == y_.size(), ErrorCode::InvalidArgument,
            "interpolant needs matching knots and values");
    const std::size_t n = x_.size();
    m_.assign(n, 0.0);
    std::vector<double> secant(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        require(x_[k + 1] > x_[k], ErrorCode::InvalidArgument, "interpolant knots must increase");
        secant[k] = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
    }
    m_[0] = secant[0];
    m_[n - 1] = secant[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) m_[k] = 0.5 * (secant[k - 1] + secant[k]);
    limit_slopes();
}

void MonotoneCubic::limit_slopes() {
    const std::size_t n = x_.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double delta = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
        if (delta == 0.0) {
            m_[k] = 0.0;
            m_[k + 1] = 0.0;
            continue;
        }
        if (m_[k] * delta < 0.0) m_[k] = 0.0;
        if (m_[k + 1] * delta < 0.0) m_[k + 1] = 0.0;
        const double a = m_[k] / delta;
        const double b = m_[k + 1] / delta;
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double t = 3.0 / std::sqrt(r);
            m_[k] = t * a * delta;
            m_[k + 1] = t * b * delta;
        }
    }
}

std::size_t MonotoneCubic::cell(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    if (it == x_.begin()) return 0;
    const std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(k, x_.size() - 2);
}

double MonotoneCubic::eval_cell(std::size_t k, double x) const {
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * m_[k] + (-2 * t3 + 3 * t2) * y_[k + 1] +
           (t3 - t2) * h * m_[k + 1];
}

double MonotoneCubic::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    return eval_cell(cell(x), x);
}

double MonotoneCubic::inverse(double y) const {
    if (y <= y_.front()) return x_.front();
    if (y >= y_.back()) return x_.back();
    // First knot whose value reaches y; the crossing lies in the cell before it.
    auto it = std::lower_bound(y_.begin(), y_.end(), y);
    const std::size_t k = static_cast<std::size_t>(it - y_.begin()) - 1;
    if (y_[k + 1] == y) return x_[k + 1];
    double a = x_[k];
    double b = x_[k + 1];
    for (int it2 = 0; it2 < 200 && b - a > 0.0; ++it2) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        if (eval_cell(k, m) < y)
            a = m;
        else
            b = m;
    }
    return b;
}

} // namespace coauction
