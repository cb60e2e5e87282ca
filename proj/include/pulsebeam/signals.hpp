#pragma once

// Driving signals g0(t) and their analytic signals
//
//     g(tau) = 1/(2 pi i) Int g0(t') / (tau - t') dt',   tau = t - i s.
//
// Fourier convention: G0(w) = Int g0(t) e^{+i w t} dt. With it the
// frequency-side form is
//
//     g(t - i s) = Sgn(s)/(2 pi) Int_{w s > 0} e^{-i w (t - i s)} G0(w) dw,
//
// which reproduces the Cauchy kernel 1/(2 pi i tau) for g0 = delta.

#include "pulsebeam/error.hpp"
#include "pulsebeam/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pulsebeam {

using cplx = std::complex<double>;

/// g0 = d^n/dt^n delta(t).
struct DeltaDerivative {
    int order = 0;
};

/// g0 = A exp(-(t - t0)^2 / (2 sigma^2)).
struct GaussianPulse {
    double center = 0;
    double width = 1;
    double amplitude = 1;

    double operator()(double t) const
    {
        const double u = (t - center) / width;
        return amplitude * std::exp(-0.5 * u * u);
    }
};

/// Piecewise-linear interpolant of samples, zero outside [times.front(), times.back()].
class SampledSignal {
public:
    SampledSignal(std::vector<double> times, std::vector<double> values)
        : times_(std::move(times)), values_(std::move(values))
    {
        if (times_.size() != values_.size())
            throw Error(Errc::validation, "sampled signal needs as many values as times");
        if (times_.size() < 2)
            throw Error(Errc::validation, "sampled signal needs at least 2 samples");
        for (std::size_t i = 0; i < times_.size(); ++i) {
            if (!std::isfinite(times_[i]) || !std::isfinite(values_[i]))
                throw Error(Errc::validation, "sampled signal entries must be finite");
            if (i > 0 && !(times_[i] > times_[i - 1]))
                throw Error(Errc::validation, "sampled signal times must be strictly increasing");
        }
    }

    /// Two-column `time,value` CSV. A non-numeric first line is treated as a header.
    static SampledSignal from_csv(const std::string& path);

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double operator()(double t) const
    {
        if (t < times_.front() || t > times_.back())
            return 0;
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        if (it == times_.end())
            return values_.back();
        const auto i = static_cast<std::size_t>(it - times_.begin());
        const double t0 = times_[i - 1], t1 = times_[i];
        const double w = (t - t0) / (t1 - t0);
        return values_[i - 1] + w * (values_[i] - values_[i - 1]);
    }

    double peak() const
    {
        double m = 0;
        for (double v : values_)
            m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

using DrivingSignal = std::variant<DeltaDerivative, GaussianPulse, SampledSignal>;

/// tau = t - i s.
struct ComplexTime {
    double t = 0;
    double s = 0;

    cplx value() const noexcept { return {t, -s}; }
    static ComplexTime from(cplx tau) noexcept { return {tau.real(), -tau.imag()}; }
};

struct SignalOptions {
    double rel_tol = 1e-9;
    int max_subintervals = 4000;
    /// Samples below truncation * max|g0| are dropped from the Cauchy integral.
    double truncation = 1e-14;
};

inline void validate(const DrivingSignal& g0)
{
    if (const auto* d = std::get_if<DeltaDerivative>(&g0); d && d->order < 0)
        throw Error(Errc::validation, "delta derivative order must be >= 0");
    if (const auto* g = std::get_if<GaussianPulse>(&g0)) {
        if (!(g->width > 0) || !std::isfinite(g->width))
            throw Error(Errc::validation, "Gaussian width sigma must be > 0");
        if (!std::isfinite(g->center) || !std::isfinite(g->amplitude))
            throw Error(Errc::validation, "Gaussian center and amplitude must be finite");
    }
}

/// g0(t). Delta derivatives vanish off the origin and are undefined at it.
inline double driving_value(const DrivingSignal& g0, double t)
{
    return std::visit(
        [t](const auto& sig) -> double {
            using S = std::decay_t<decltype(sig)>;
            if constexpr (std::is_same_v<S, DeltaDerivative>) {
                if (t == 0)
                    throw Error(Errc::domain, "delta derivative has no pointwise value at t = 0");
                return 0.0;
            } else {
                return sig(t);
            }
        },
        g0);
}

/// Scale used as an absolute floor when a result is expected to vanish.
inline double signal_scale(const DrivingSignal& g0)
{
    return std::visit(
        [](const auto& sig) -> double {
            using S = std::decay_t<decltype(sig)>;
            if constexpr (std::is_same_v<S, DeltaDerivative>)
                return 1.0;
            else if constexpr (std::is_same_v<S, GaussianPulse>)
                return std::abs(sig.amplitude);
            else
                return sig.peak();
        },
        g0);
}

namespace detail {

inline constexpr cplx two_pi_i{0.0, 2.0 * std::numbers::pi};

inline cplx delta_derivative_signal(int n, cplx tau)
{
    // (-1)^n n! / (2 pi i tau^{n+1})
    double factorial = 1;
    for (int k = 2; k <= n; ++k)
        factorial *= k;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * factorial / (two_pi_i * std::pow(tau, n + 1));
}

inline cplx cauchy_integral(const auto& g0, std::vector<double> breaks, const ComplexTime& tau,
                            const SignalOptions& opt, const char* what)
{
    const cplx z = tau.value();
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    auto integrand = [&](double tp) { return g0(tp) / (z - tp); };
    quad::Options qopt;
    qopt.rel_tol = opt.rel_tol;
    qopt.max_subintervals = opt.max_subintervals;
    const auto res = quad::integrate<cplx>(integrand, std::span<const double>(breaks), qopt);
    if (!res.converged)
        throw AccuracyError(std::string(what) + " Cauchy integral did not converge",
                            std::abs(res.value) / (2 * std::numbers::pi), res.error / (2 * std::numbers::pi));
    return res.value / two_pi_i;
}

// Extra breakpoints around Re tau so the near-singular peak of the Cauchy
// kernel is resolved from the first pass.
inline void add_peak_breaks(std::vector<double>& breaks, const ComplexTime& tau, double lo, double hi)
{
    const double width = std::abs(tau.s);
    for (double k : {-8.0, -1.0, 0.0, 1.0, 8.0}) {
        const double b = tau.t + k * width;
        if (b > lo && b < hi)
            breaks.push_back(b);
    }
}

inline cplx analytic_gaussian(const GaussianPulse& g, const ComplexTime& tau, const SignalOptions& opt)
{
    if (tau.s == 0)
        throw Error(Errc::non_analytic_point,
                    "Gaussian analytic signal is not analytic on the real axis (support is all of R)");
    const double half = g.width * std::sqrt(-2.0 * std::log(opt.truncation));
    const double lo = g.center - half, hi = g.center + half;
    std::vector<double> breaks{lo, g.center, hi};
    add_peak_breaks(breaks, tau, lo, hi);
    return cauchy_integral(g, std::move(breaks), tau, opt, "Gaussian");
}

inline cplx analytic_sampled(const SampledSignal& g, const ComplexTime& tau, const SignalOptions& opt)
{
    const auto& ts = g.times();
    const auto& vs = g.values();
    if (tau.s == 0 && tau.t >= ts.front() && tau.t <= ts.back())
        throw Error(Errc::non_analytic_point, "tau is real and inside the support of the sampled signal");

    const double floor = opt.truncation * g.peak();
    if (g.peak() == 0)
        return {0, 0};
    // Integrate over runs of segments whose endpoints are not both negligible.
    cplx total{0, 0};
    std::size_t i = 0;
    const std::size_t n = ts.size();
    while (i + 1 < n) {
        if (std::abs(vs[i]) <= floor && std::abs(vs[i + 1]) <= floor) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j + 1 < n && !(std::abs(vs[j]) <= floor && std::abs(vs[j + 1]) <= floor))
            ++j;
        std::vector<double> breaks(ts.begin() + static_cast<std::ptrdiff_t>(i),
                                   ts.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        if (tau.s != 0)
            add_peak_breaks(breaks, tau, ts[i], ts[j]);
        total += cauchy_integral(g, std::move(breaks), tau, opt, "sampled-signal");
        i = j;
    }
    return total;
}

} // namespace detail

/// g(tau) for tau = t - i s.
inline cplx analytic_signal(const DrivingSignal& g0, const ComplexTime& tau, const SignalOptions& opt = {})
{
    validate(g0);
    if (!std::isfinite(tau.t) || !std::isfinite(tau.s))
        throw Error(Errc::validation, "complex time must be finite");
    return std::visit(
        [&](const auto& sig) -> cplx {
            using S = std::decay_t<decltype(sig)>;
            if constexpr (std::is_same_v<S, DeltaDerivative>) {
                if (tau.t == 0 && tau.s == 0)
                    throw Error(Errc::non_analytic_point, "delta derivative analytic signal is singular at tau = 0");
                return detail::delta_derivative_signal(sig.order, tau.value());
            } else if constexpr (std::is_same_v<S, GaussianPulse>) {
                return detail::analytic_gaussian(sig, tau, opt);
            } else {
                return detail::analytic_sampled(sig, tau, opt);
            }
        },
        g0);
}

// ---------------------------------------------------------------------------
// Frequency-side evaluation.

/// G0(w) = Int g0(t) e^{i w t} dt.
inline cplx fourier_transform(const DrivingSignal& g0, double w)
{
    return std::visit(
        [w](const auto& sig) -> cplx {
            using S = std::decay_t<decltype(sig)>;
            if constexpr (std::is_same_v<S, DeltaDerivative>) {
                // Int delta^(n)(t) e^{iwt} dt = (-i w)^n
                return std::pow(cplx(0, -w), sig.order);
            } else if constexpr (std::is_same_v<S, GaussianPulse>) {
                const double sw = sig.width * w;
                return sig.amplitude * sig.width * std::sqrt(2 * std::numbers::pi) * std::exp(-0.5 * sw * sw)
                    * std::polar(1.0, w * sig.center);
            } else {
                // Exact transform of the piecewise-linear interpolant.
                const auto& ts = sig.times();
                const auto& vs = sig.values();
                cplx total{0, 0};
                for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
                    const double h = ts[k + 1] - ts[k];
                    const double slope = (vs[k + 1] - vs[k]) / h;
                    const double x = w * h;
                    cplx e0, e1; // Int_0^h e^{iwu} du, Int_0^h u e^{iwu} du
                    if (std::abs(x) < 0.5) {
                        cplx term{1, 0}, s0{0, 0}, s1{0, 0};
                        double fact = 1; // k!
                        for (int m = 0; m < 24; ++m) {
                            s0 += term / (fact * (m + 1));
                            s1 += term / (fact * (m + 2));
                            term *= cplx(0, x);
                            fact *= (m + 1);
                        }
                        e0 = h * s0;
                        e1 = h * h * s1;
                    } else {
                        const cplx iw{0, w};
                        const cplx eh = std::polar(1.0, x);
                        e0 = (eh - 1.0) / iw;
                        e1 = h * eh / iw + (eh - 1.0) / (w * w);
                    }
                    total += std::polar(1.0, w * ts[k]) * (vs[k] * e0 + slope * e1);
                }
                return total;
            }
        },
        g0);
}

struct SpectralOptions {
    /// Gauss-Legendre points per panel.
    int points_per_panel = 20;
    /// Minimum panel count over [0, cutoff].
    int min_panels = 64;
    /// Upper limit on the frequency grid size (panels).
    int max_panels = 1'000'000;
    /// Highest delta-derivative order the grid is trusted for.
    int max_delta_order = 40;
};

namespace detail {

// Frequency cutoff where |G0(w)| e^{-w |s|} has dropped by ~e^{-37} from its peak.
inline double spectral_cutoff(const DrivingSignal& g0, double abs_s)
{
    constexpr double decades = 37.0;
    return std::visit(
        [abs_s](const auto& sig) -> double {
            using S = std::decay_t<decltype(sig)>;
            if constexpr (std::is_same_v<S, DeltaDerivative>) {
                const double n = sig.order;
                // log envelope: n log w - w |s|, peak at n/|s|.
                const double w_peak = n / abs_s;
                const double peak_log = n > 0 ? n * std::log(w_peak) - n : 0.0;
                double w = std::max(w_peak, 1.0 / abs_s);
                while (n * std::log(w) - w * abs_s > peak_log - decades)
                    w *= 1.25;
                return w;
            } else if constexpr (std::is_same_v<S, GaussianPulse>) {
                const double sg = sig.width;
                // sigma^2 w^2 / 2 + w |s| = decades
                return (-abs_s + std::sqrt(abs_s * abs_s + 2 * decades * sg * sg)) / (sg * sg);
            } else {
                return decades / abs_s;
            }
        },
        g0);
}

// Largest rate |t - t_k| at which the integrand phase turns.
inline double phase_rate(const DrivingSignal& g0, double t)
{
    return std::visit(
        [t](const auto& sig) -> double {
            using S = std::decay_t<decltype(sig)>;
            if constexpr (std::is_same_v<S, DeltaDerivative>)
                return std::abs(t);
            else if constexpr (std::is_same_v<S, GaussianPulse>)
                return std::abs(t - sig.center);
            else
                return std::max(std::abs(t - sig.times().front()), std::abs(t - sig.times().back()));
        },
        g0);
}

} // namespace detail

/// Frequency-side analytic signal: Sgn(s)/(2 pi) Int_{ws>0} e^{-iw(t-is)} G0(w) dw,
/// evaluated with composite Gauss-Legendre on a truncated frequency grid.
inline cplx spectral_signal(const DrivingSignal& g0, double t, double s, const SpectralOptions& opt = {})
{
    validate(g0);
    if (s == 0 || !std::isfinite(s) || !std::isfinite(t))
        throw Error(Errc::domain, "spectral analytic signal needs finite t and s != 0");
    if (const auto* d = std::get_if<DeltaDerivative>(&g0); d && d->order > opt.max_delta_order)
        throw AccuracyError("delta derivative order " + std::to_string(d->order)
                                + " exceeds the frequency grid's dynamic range",
                            std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity());

    const double sign = s > 0 ? 1.0 : -1.0;
    const double abs_s = std::abs(s);
    const double cutoff = detail::spectral_cutoff(g0, abs_s);
    const double rate = detail::phase_rate(g0, t);
    double width = cutoff / opt.min_panels;
    if (rate > 0)
        width = std::min(width, 2.0 / rate);
    const double panels_real = std::ceil(cutoff / width);
    if (!(panels_real <= opt.max_panels))
        throw AccuracyError("frequency grid would need " + std::to_string(panels_real) + " panels",
                            std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity());
    const int panels = static_cast<int>(panels_real);
    width = cutoff / panels;

    static const quad::GaussLegendreRule rule20 = quad::gauss_legendre(20);
    const quad::GaussLegendreRule custom =
        opt.points_per_panel == 20 ? quad::GaussLegendreRule{} : quad::gauss_legendre(opt.points_per_panel);
    const auto& rule = opt.points_per_panel == 20 ? rule20 : custom;

    const cplx tau{t, -s};
    cplx sum{0, 0};
    for (int k = 0; k < panels; ++k) {
        const double mid = (k + 0.5) * width;
        cplx panel{0, 0};
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double nu = mid + 0.5 * width * rule.nodes[j];
            const double w = sign * nu;
            panel += rule.weights[j] * std::exp(cplx(0, -1) * w * tau) * fourier_transform(g0, w);
        }
        sum += 0.5 * width * panel;
    }
    return sign / (2 * std::numbers::pi) * sum;
}

// ---------------------------------------------------------------------------

struct Extrapolated {
    double value = 0;
    double error = 0;
    double imag_residual = 0; ///< |Im| of the complex extrapolant
};

inline void validate_eps_ladder(const std::vector<double>& eps)
{
    if (eps.size() < 3)
        throw Error(Errc::validation, "epsilon ladder needs at least 3 entries");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0) || !std::isfinite(eps[i]))
            throw Error(Errc::validation, "epsilon ladder entries must be positive and finite");
        if (i > 0 && !(eps[i] < eps[i - 1]))
            throw Error(Errc::validation, "epsilon ladder must be strictly descending");
    }
}

/// Geometric ladder eps0, eps0/2, eps0/4, ...
inline std::vector<double> geometric_ladder(double eps0, int count, double ratio = 2.0)
{
    std::vector<double> out;
    double e = eps0;
    for (int i = 0; i < count; ++i, e /= ratio)
        out.push_back(e);
    return out;
}

struct JumpOptions {
    SignalOptions signal{.rel_tol = 1e-12};
    /// Accept the extrapolant when its error estimate is below
    /// rel_tol * max(|limit|, floor_fraction * signal scale).
    double rel_tol = 1e-6;
    double floor_fraction = 1e-3;
};

/// lim_{eps -> 0+} g(t - i eps) - g(t + i eps), which equals g0(t) wherever
/// g0 is continuous.
inline Extrapolated jump_of_signal(const DrivingSignal& g0, double t, const std::vector<double>& eps_list,
                                   const JumpOptions& opt = {})
{
    validate_eps_ladder(eps_list);
    std::vector<cplx> jumps;
    jumps.reserve(eps_list.size());
    for (double e : eps_list)
        jumps.push_back(analytic_signal(g0, {t, e}, opt.signal) - analytic_signal(g0, {t, -e}, opt.signal));
    const auto ex = quad::extrapolate_to_zero<cplx>(eps_list, jumps);
    const double scale = std::max(std::abs(ex.value), opt.floor_fraction * signal_scale(g0));
    if (!(ex.error <= opt.rel_tol * scale))
        throw AccuracyError("boundary-value jump extrapolation did not settle", ex.value.real(), ex.error);
    return {ex.value.real(), ex.error, std::abs(ex.value.imag())};
}

// ---------------------------------------------------------------------------

inline SampledSignal SampledSignal::from_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::io, "cannot open sampled-signal file '" + path + "'");
    std::vector<double> times, values;
    std::string line;
    std::size_t line_no = 0;
    auto parse = [](std::string_view field, double& out) {
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
            field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
            field.remove_suffix(1);
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
        return ec == std::errc() && ptr == field.data() + field.size() && !field.empty();
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw Error(Errc::validation, path + ":" + std::to_string(line_no) + ": expected 'time,value'");
        double t = 0, v = 0;
        const bool ok = parse(line.substr(0, comma), t) && parse(line.substr(comma + 1), v);
        if (!ok) {
            if (line_no == 1 && times.empty())
                continue; // header
            throw Error(Errc::validation, path + ":" + std::to_string(line_no) + ": malformed number");
        }
        times.push_back(t);
        values.push_back(v);
    }
    return SampledSignal(std::move(times), std::move(values));
}

} // namespace pulsebeam
