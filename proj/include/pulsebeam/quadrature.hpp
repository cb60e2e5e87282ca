#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

namespace pulsebeam::quad {

struct Options {
    double rel_tol = 1e-9;
    double abs_tol = 0;
    int max_subintervals = 4000;
};

template <class T>
struct Result {
    T value{};
    double error = 0;
    bool converged = false;
    int evaluations = 0;
};

namespace detail {

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss
// weights (Gauss nodes are xgk[1], xgk[3], xgk[5], xgk[7]).
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
    double lo;
    double hi;
    T value;
    double error;
    friend bool operator<(const Segment& a, const Segment& b) { return a.error < b.error; }
};

// Error estimate follows QUADPACK qk15.
template <class T, class F>
Segment<T> gauss_kronrod_15(const F& f, double lo, double hi)
{
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const T fc = f(center);
    T kronrod = fc * wgk[7];
    T gauss = fc * wg[3];
    double abs_sum = std::abs(fc) * wgk[7];

    std::array<T, 7> f1{}, f2{};
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        kronrod += wgk[j] * (f1[j] + f2[j]);
        abs_sum += wgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1)
            gauss += wg[j / 2] * (f1[j] + f2[j]);
    }
    const T mean = kronrod * 0.5;
    double asc = wgk[7] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j)
        asc += wgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double width = std::abs(half);
    const T value = kronrod * half;
    double err = std::abs((kronrod - gauss) * half);
    const double resasc = asc * width;
    const double resabs = abs_sum * width;
    if (resasc != 0 && err != 0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50 * eps))
        err = std::max(50 * eps * resabs, err);
    return {lo, hi, value, err};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration over consecutive pieces
/// [breaks[0], breaks[1]], [breaks[1], breaks[2]], ... The interval with the
/// largest error estimate is bisected until the total error falls below
/// max(abs_tol, rel_tol * |value|) or the subinterval budget runs out.
template <class T, class F>
Result<T> integrate(const F& f, std::span<const double> breaks, const Options& opt = {})
{
    Result<T> out;
    if (breaks.size() < 2)
        return out;

    std::priority_queue<detail::Segment<T>> heap;
    T total{};
    double total_err = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] == breaks[i])
            continue;
        auto seg = detail::gauss_kronrod_15<T>(f, breaks[i], breaks[i + 1]);
        out.evaluations += 15;
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }

    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (!heap.empty() && !(total_err <= target()) && static_cast<int>(heap.size()) < opt.max_subintervals) {
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            heap.push(worst); // cannot split further at double resolution
            break;
        }
        auto left = detail::gauss_kronrod_15<T>(f, worst.lo, mid);
        auto right = detail::gauss_kronrod_15<T>(f, mid, worst.hi);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the pieces so the running-update rounding does not leak.
    T sum{};
    double err = 0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = sum;
    out.error = err;
    out.converged = std::isfinite(std::abs(sum)) && std::isfinite(err)
        && err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(sum));
    return out;
}

template <class T, class F>
Result<T> integrate(const F& f, double lo, double hi, const Options& opt = {})
{
    const std::array<double, 2> breaks{lo, hi};
    return integrate<T>(f, std::span<const double>(breaks), opt);
}

/// n-point Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on
/// P_n from the Chebyshev initial guesses).
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussLegendreRule gauss_legendre(int n)
{
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // recompute the derivative at the converged node
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double w = 2.0 / ((1 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    return rule;
}

template <class T>
struct Extrapolation {
    T value{};
    double error = 0;
};

/// Polynomial extrapolation of samples v(h_i) to h = 0 (Neville's scheme).
/// The error is the gap between the two highest-order estimates.
template <class T>
Extrapolation<T> extrapolate_to_zero(std::span<const double> h, std::span<const T> v)
{
    const std::size_t n = std::min(h.size(), v.size());
    std::vector<T> table(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
    Extrapolation<T> out;
    if (n == 0)
        return out;
    T lower_order = table[0];
    for (std::size_t level = 1; level < n; ++level) {
        if (level + 1 == n)
            lower_order = table[1];
        for (std::size_t i = 0; i + level < n; ++i) {
            const double hi = h[i];
            const double hj = h[i + level];
            table[i] = (hi * table[i + 1] - hj * table[i]) / (hi - hj);
        }
    }
    out.value = table[0];
    // Gap to the next-lower-order estimate built from the finest samples.
    out.error = n > 1 ? std::abs(out.value - lower_order) : std::numeric_limits<double>::infinity();
    return out;
}

} // namespace pulsebeam::quad
