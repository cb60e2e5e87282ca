#pragma once

// Emitter/receiver channels. The emitter sits at z_e = x_e + i y_e (future
// tube), the receiver at z_r = x_r - i y_r (past tube); the channel amplitude
// is W(z_r - z_e) = W((x_r - x_e) - i (y_e + y_r)).

#include "pulsebeam/error.hpp"
#include "pulsebeam/propagator.hpp"
#include "pulsebeam/signals.hpp"
#include "pulsebeam/spacetime.hpp"
#include "pulsebeam/wavelet.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace pulsebeam {

struct Endpoint {
    RealEvent center;
    ConeVector extent;
};

class Channel {
public:
    Channel(const Endpoint& emitter, const Endpoint& receiver)
        : emitter_(emitter), receiver_(receiver),
          separation_(receiver.center.vector() - emitter.center.vector()),
          extent_sum_(emitter.extent.vector() + receiver.extent.vector())
    {
        if (cone_status(extent_sum_) != ConeStatus::interior)
            throw Error(Errc::causality, "channel extent y_e + y_r must lie strictly inside the future cone");
    }

    const Endpoint& emitter() const noexcept { return emitter_; }
    const Endpoint& receiver() const noexcept { return receiver_; }

    /// x = x_r - x_e
    RealEvent separation() const { return RealEvent(separation_); }
    /// y = y_e + y_r
    ConeVector extent() const { return ConeVector(extent_sum_); }

    /// a = |y_e + y_r|
    double aperture() const noexcept { return norm(extent_sum_.space); }

private:
    Endpoint emitter_;
    Endpoint receiver_;
    FourVector separation_;
    FourVector extent_sum_;
};

inline Channel make_channel(const RealEvent& x_e, const ConeVector& y_e, const RealEvent& x_r, const ConeVector& y_r)
{
    return Channel({x_e, y_e}, {x_r, y_r});
}

/// Overload taking raw 4-vectors. An extent outside the cone is a validation
/// error here, since nothing has been constructed yet.
inline Channel make_channel(const FourVector& x_e, const FourVector& y_e, const FourVector& x_r, const FourVector& y_r)
{
    auto extent = [](const FourVector& v, const char* name) {
        if (cone_status(v) == ConeStatus::invalid)
            throw Error(Errc::validation, std::string(name) + " extent must satisfy s > |y| or be exactly zero");
        return ConeVector(v);
    };
    return make_channel(RealEvent(x_e), extent(y_e, "emitter"), RealEvent(x_r), extent(y_r, "receiver"));
}

/// Transmission amplitude W(z_r - z_e).
inline cplx channel_amplitude(const Channel& ch, const DrivingSignal& g0, const WaveletOptions& opt = {})
{
    return wavelet_eval(g0, ch.separation(), ch.extent(), opt);
}

/// Complex spacetime translation z_e -> z_e + (xi + i eta), z_r -> z_r + (xi + i eta):
/// x_e, x_r shift by xi; y_e gains eta and y_r loses it.
inline Channel channel_translate(const Channel& ch, const FourVector& xi, const FourVector& eta)
{
    if (!is_finite(xi) || !is_finite(eta))
        throw Error(Errc::validation, "translation components must be finite");
    const FourVector ye = ch.emitter().extent.vector() + eta;
    const FourVector yr = ch.receiver().extent.vector() - eta;
    if (cone_status(ye) == ConeStatus::invalid)
        throw Error(Errc::cone_violation, "translated emitter extent y_e + eta leaves the future cone");
    if (cone_status(yr) == ConeStatus::invalid)
        throw Error(Errc::cone_violation, "translated receiver extent y_r - eta leaves the future cone");
    return Channel({RealEvent(ch.emitter().center.vector() + xi), ConeVector(ye)},
                   {RealEvent(ch.receiver().center.vector() + xi), ConeVector(yr)});
}

/// Channel B: idealized event receiver (eta = y_r).
inline Channel with_event_receiver(const Channel& ch)
{
    return channel_translate(ch, {}, ch.receiver().extent.vector());
}

/// Channel C: idealized event emitter (eta = -y_e).
inline Channel with_event_emitter(const Channel& ch)
{
    return channel_translate(ch, {}, -1.0 * ch.emitter().extent.vector());
}

struct ChannelMetrics {
    double emitter_duration = 0;  ///< T_e = s_e - a_e
    double receiver_duration = 0; ///< T_r = s_r - a_r
    double duration = 0;          ///< T = s - a
    double emitter_bandwidth = 0; ///< 1/T_e, +inf for a null endpoint
    double receiver_bandwidth = 0;
    double bandwidth = 0;         ///< 1/T
    double aperture = 0;          ///< a = |y_e + y_r|
};

inline ChannelMetrics channel_metrics(const Channel& ch)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const auto& ye = ch.emitter().extent;
    const auto& yr = ch.receiver().extent;
    ChannelMetrics m;
    m.emitter_duration = ye.is_null() ? 0.0 : ye.time() - ye.aperture();
    m.receiver_duration = yr.is_null() ? 0.0 : yr.time() - yr.aperture();
    m.aperture = ch.aperture();
    m.duration = ch.extent().time() - m.aperture;
    m.emitter_bandwidth = ye.is_null() ? inf : 1.0 / m.emitter_duration;
    m.receiver_bandwidth = yr.is_null() ? inf : 1.0 / m.receiver_duration;
    m.bandwidth = 1.0 / m.duration;
    return m;
}

struct GainSample {
    double theta = 0;
    double peak = 0;  ///< far-zone peak 1 / (8 pi^2 r (s - a cos theta_eff))
    double exact = 0; ///< |W(z_r - z_e)| for g0 = delta at t = r
};

/// Receiver-tilt scan. The separation is r along +z, the emitter extent points
/// along +z and the receiver extent is tilted by theta in the x-z plane.
inline std::vector<GainSample> gain_scan(double a_e, double s_e, double a_r, double s_r, double r,
                                         const std::vector<double>& theta_grid, const GeometryConfig& geometry = {})
{
    if (!(a_e >= 0 && s_e > a_e) || !(a_r >= 0 && s_r > a_r))
        throw Error(Errc::causality, "gain scan needs interior extents (s_e > a_e >= 0, s_r > a_r >= 0)");
    if (!(r > 0))
        throw Error(Errc::validation, "gain scan needs separation r > 0");

    const ConeVector ye({0, 0, a_e}, s_e);
    const RealEvent xe({0, 0, 0}, 0);
    const RealEvent xr({0, 0, r}, r);
    const DrivingSignal impulse = DeltaDerivative{0};
    const WaveletOptions wopt{geometry, {}};
    std::vector<GainSample> out;
    out.reserve(theta_grid.size());
    for (double th : theta_grid) {
        const ConeVector yr({a_r * std::sin(th), 0, a_r * std::cos(th)}, s_r);
        const Channel ch = make_channel(xe, ye, xr, yr);
        // a cos(theta_eff) = y . x_hat = a_e + a_r cos(theta)
        const double s = s_e + s_r;
        const double axial = a_e + a_r * std::cos(th);
        GainSample g;
        g.theta = th;
        g.peak = 1.0 / (eight_pi_sq * r * (s - axial));
        g.exact = std::abs(channel_amplitude(ch, impulse, wopt));
        out.push_back(g);
    }
    return out;
}

/// theta_k = pi (2k - (n-1)) / (n-1), k = 0..n-1: symmetric about 0 and
/// containing 0 exactly when n is odd.
inline std::vector<double> symmetric_angle_grid(int n)
{
    if (n < 2)
        throw Error(Errc::validation, "angle grid needs at least 2 points");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    const double m = n - 1;
    for (int k = 0; k < n; ++k)
        out.push_back(std::numbers::pi * (2.0 * k - m) / m);
    return out;
}

/// theta_k = pi k / (n-1), k = 0..n-1.
inline std::vector<double> half_angle_grid(int n)
{
    if (n < 2)
        throw Error(Errc::validation, "angle grid needs at least 2 points");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        out.push_back(std::numbers::pi * k / (n - 1));
    return out;
}

} // namespace pulsebeam
