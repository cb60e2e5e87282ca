#pragma once

// Extended propagator P~(z, tau) = 1 / (8 i pi^2 r~ (tau - r~)), its far-zone
// pulsed-beam form and the angular beam profile.

#include "pulsebeam/error.hpp"
#include "pulsebeam/geometry.hpp"
#include "pulsebeam/vec3.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace pulsebeam {

inline constexpr double eight_pi_sq = 8.0 * std::numbers::pi * std::numbers::pi;

inline std::complex<double> extended_propagator(const Vec3& x, const Vec3& y, double t, double s,
                                                const GeometryConfig& config = {})
{
    if (!std::isfinite(t) || !std::isfinite(s))
        throw Error(Errc::validation, "t and s must be finite");
    const auto d = complex_distance(x, y, config);
    const double a = norm(y);
    if (!(s > a))
        throw Error(Errc::causality, "extended propagator requires s > a = |y| (s = " + std::to_string(s)
                                         + ", a = " + std::to_string(a) + ")");
    if (d.near_circle)
        throw Error(Errc::singularity, "point lies within the guard radius of the branch circle r = a, x3 = 0");
    const std::complex<double> rt = d.value();
    const std::complex<double> tau{t, -s};
    return 1.0 / (std::complex<double>(0, eight_pi_sq) * rt * (tau - rt));
}

/// 1 / (8 i pi^2 r {(t - r) - i (s - a cos theta)}), valid for r >> a.
inline std::complex<double> far_zone_propagator(double r, double theta, double t, double s, double a)
{
    if (!(r > 0))
        throw Error(Errc::validation, "far-zone propagator requires r > 0");
    if (!(a >= 0))
        throw Error(Errc::validation, "aperture a must be >= 0");
    if (!(s > a))
        throw Error(Errc::causality, "far-zone propagator requires s > a");
    const std::complex<double> denom{t - r, -(s - a * std::cos(theta))};
    return 1.0 / (std::complex<double>(0, eight_pi_sq * r) * denom);
}

/// Duration T(theta) = s - a cos(theta).
inline double beam_duration(double s, double a, double theta) { return s - a * std::cos(theta); }

/// Far-field radiation pattern F(theta) = 1 / (8 pi^2 T(theta)).
inline double radiation_pattern(double s, double a, double theta)
{
    return 1.0 / (eight_pi_sq * beam_duration(s, a, theta));
}

/// Peak magnitude at t = r in the far zone: F(theta) / r.
inline double peak_amplitude(double s, double a, double r, double theta)
{
    return 1.0 / (eight_pi_sq * r * beam_duration(s, a, theta));
}

struct BeamSample {
    double theta = 0;
    double duration = 0;
    double pattern = 0;
    double peak = 0;
};

struct BeamProfile {
    double eccentricity = 0; ///< a / s
    std::vector<BeamSample> samples;
};

inline BeamProfile beam_profile(double s, double a, double r, const std::vector<double>& theta_grid)
{
    if (!(a >= 0) || !(s > a))
        throw Error(Errc::causality, "beam profile requires s > a >= 0");
    if (!(r > 0))
        throw Error(Errc::validation, "beam profile requires r > 0");
    BeamProfile out;
    out.eccentricity = a / s;
    out.samples.reserve(theta_grid.size());
    for (double th : theta_grid)
        out.samples.push_back({th, beam_duration(s, a, th), radiation_pattern(s, a, th), peak_amplitude(s, a, r, th)});
    return out;
}

} // namespace pulsebeam
