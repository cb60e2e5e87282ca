#pragma once

// Pulsed-beam wavelets W(x - i y) = g(tau - r~) / (4 pi r~), their boundary
// jump across real spacetime, and the finite-difference wave residual.

#include "pulsebeam/error.hpp"
#include "pulsebeam/geometry.hpp"
#include "pulsebeam/quadrature.hpp"
#include "pulsebeam/signals.hpp"
#include "pulsebeam/spacetime.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace pulsebeam {

struct WaveletOptions {
    GeometryConfig geometry;
    SignalOptions signal;
};

namespace detail {

// W at real point (x, t) with raw imaginary part (y, s); no cone checks, so
// it serves both tube sides. y = 0 uses the real distance.
inline cplx wavelet_raw(const DrivingSignal& g0, const Vec3& x, double t, const Vec3& y, double s,
                        const WaveletOptions& opt)
{
    const auto d = extended_distance(x, y, opt.geometry);
    if (d.near_circle)
        throw Error(Errc::singularity, "wavelet evaluated within the guard radius of the branch circle");
    const cplx rt = d.value();
    const cplx u = cplx(t, -s) - rt;
    return analytic_signal(g0, ComplexTime::from(u), opt.signal) / (4 * std::numbers::pi * rt);
}

} // namespace detail

inline void require_interior(const ConeVector& y)
{
    if (!y.is_interior())
        throw Error(Errc::causality, "wavelet extent must lie strictly inside the future cone (s > |y|)");
}

/// W(x - i y) for y strictly inside the future cone.
inline cplx wavelet_eval(const DrivingSignal& g0, const RealEvent& x, const ConeVector& y,
                         const WaveletOptions& opt = {})
{
    require_interior(y);
    return detail::wavelet_raw(g0, x.space(), x.time(), y.space(), y.time(), opt);
}

/// A wavelet bound to its driving signal and extent.
class WaveletField {
public:
    WaveletField(DrivingSignal signal, const ConeVector& extent, WaveletOptions options = {})
        : signal_(std::move(signal)), extent_(extent), options_(options)
    {
        validate(signal_);
        require_interior(extent_);
    }

    cplx operator()(const RealEvent& x) const { return wavelet_eval(signal_, x, extent_, options_); }

    const DrivingSignal& signal() const noexcept { return signal_; }
    const ConeVector& extent() const noexcept { return extent_; }

private:
    DrivingSignal signal_;
    ConeVector extent_;
    WaveletOptions options_;
};

struct JumpResult {
    cplx value;
    double error = 0;
};

/// lim_{eps -> 0+} W(x - i eps y) - W(x + i eps y). The x - i eps y side lies in
/// the past tube (tau in the lower half-plane), so with the Cauchy kernel
/// this difference tends to +g0(t - r) / (4 pi r), mirroring the scalar jump
/// g(t - i eps) - g(t + i eps) -> g0(t).
inline JumpResult boundary_jump(const DrivingSignal& g0, const RealEvent& x, const ConeVector& y,
                                const std::vector<double>& eps_list, const JumpOptions& opt = {},
                                const GeometryConfig& geometry = {})
{
    require_interior(y);
    validate_eps_ladder(eps_list);
    const double r = norm(x.space());
    if (!(r > 0))
        throw Error(Errc::validation, "boundary jump is undefined at r = 0");

    WaveletOptions wopt{geometry, opt.signal};
    std::vector<cplx> jumps;
    jumps.reserve(eps_list.size());
    for (double e : eps_list) {
        const Vec3 ys = e * y.space();
        const double ss = e * y.time();
        const cplx past = detail::wavelet_raw(g0, x.space(), x.time(), ys, ss, wopt);
        const cplx future = detail::wavelet_raw(g0, x.space(), x.time(), -ys, -ss, wopt);
        jumps.push_back(past - future);
    }
    const auto ex = quad::extrapolate_to_zero<cplx>(eps_list, jumps);
    const double floor = opt.floor_fraction * signal_scale(g0) / (4 * std::numbers::pi * r);
    if (!(ex.error <= opt.rel_tol * std::max(std::abs(ex.value), floor)))
        throw AccuracyError("wavelet boundary-jump extrapolation did not settle", std::abs(ex.value), ex.error);
    return {ex.value, ex.error};
}

struct WaveResidualOptions {
    WaveletOptions wavelet{.geometry = {}, .signal = {.rel_tol = 1e-13, .max_subintervals = 20000}};
    /// Refuse stencils that touch the branch cut or circle.
    bool guard = true;
};

/// Second-order central-difference d_t^2 W - Laplacian W with one step h in
/// all four variables. Vanishes as O(h^2) away from the branch cut.
inline cplx wave_residual(const DrivingSignal& g0, const RealEvent& x, const ConeVector& y, double h,
                          const WaveResidualOptions& opt = {})
{
    require_interior(y);
    if (!(h > 0) || !std::isfinite(h))
        throw Error(Errc::validation, "finite-difference step must be positive");
    if (opt.guard && !(distance_to_cut(x.space(), y.space()) > h))
        throw Error(Errc::stencil_placement, "finite-difference stencil touches the branch cut or circle");

    const Vec3& c = x.space();
    const double t = x.time();
    auto w = [&](const Vec3& p, double tp) {
        return detail::wavelet_raw(g0, p, tp, y.space(), y.time(), opt.wavelet);
    };
    const cplx center = w(c, t);
    const cplx dtt = w(c, t + h) - 2.0 * center + w(c, t - h);
    cplx lap{0, 0};
    const std::array<Vec3, 3> axes{Vec3{h, 0, 0}, Vec3{0, h, 0}, Vec3{0, 0, h}};
    for (const auto& e : axes)
        lap += w(c + e, t) - 2.0 * center + w(c - e, t);
    return (dtt - lap) / (h * h);
}

struct ConvergenceFit {
    std::vector<double> steps;
    std::vector<double> residuals; ///< |residual| per step
    double order = 0;              ///< least-squares slope of log|res| vs log h
    cplx value_at_point;           ///< W at the stencil center
};

inline ConvergenceFit residual_convergence(const DrivingSignal& g0, const RealEvent& x, const ConeVector& y,
                                           const std::vector<double>& steps, const WaveResidualOptions& opt = {})
{
    ConvergenceFit fit;
    fit.steps = steps;
    for (double h : steps)
        fit.residuals.push_back(std::abs(wave_residual(g0, x, y, h, opt)));
    const double n = static_cast<double>(steps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const double lx = std::log(steps[i]);
        const double ly = std::log(fit.residuals[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    fit.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.value_at_point = detail::wavelet_raw(g0, x.space(), x.time(), y.space(), y.time(), opt.wavelet);
    return fit;
}

} // namespace pulsebeam
