#pragma once

// Complex distance r~ = sqrt((x - i y).(x - i y)) = p - i q and its branch
// structure. The branch with p >= 0 is used, the cut is the flat disk
// {r <= a, x3 = 0} and the branch circle is {r = a, x3 = 0}.

#include "pulsebeam/error.hpp"
#include "pulsebeam/vec3.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>

namespace pulsebeam {

struct GeometryConfig {
    /// near_circle is flagged when |r~| < near_circle_rel_tol * a.
    double near_circle_rel_tol = 1e-9;
};

struct ComplexDistance {
    double p = 0; ///< Re r~, always >= 0
    double q = 0; ///< -Im r~
    bool on_cut = false;
    bool near_circle = false;

    std::complex<double> value() const noexcept { return {p, -q}; }
    double magnitude() const noexcept { return std::hypot(p, q); }
};

namespace detail {

// Decomposition of x relative to the unit vector along y.
struct AxialSplit {
    double r = 0;   // |x|
    double a = 0;   // |y|
    double x3 = 0;  // x . y_hat
    double rho = 0; // distance from the y axis
};

inline AxialSplit axial_split(const Vec3& x, const Vec3& y)
{
    if (!is_finite(x) || !is_finite(y))
        throw Error(Errc::validation, "position and extent must be finite");
    AxialSplit s;
    s.a = norm(y);
    s.r = norm(x);
    if (s.a == 0)
        return s;
    const Vec3 y_hat = (1.0 / s.a) * y;
    s.x3 = dot(x, y_hat);
    s.rho = norm(cross(x, y_hat));
    return s;
}

inline ComplexDistance distance_from_split(const AxialSplit& s, const GeometryConfig& config)
{
    ComplexDistance d;
    const double re_w = (s.r - s.a) * (s.r + s.a);
    if (s.x3 == 0 && s.r <= s.a) {
        // On the disk: the x3 -> 0+ limit.
        d.p = 0;
        d.q = std::sqrt(-re_w);
        d.on_cut = s.r < s.a;
    } else {
        const std::complex<double> root = std::sqrt(std::complex<double>(re_w, -2.0 * s.a * s.x3));
        d.p = std::min(std::abs(root.real()), s.r);
        d.q = std::copysign(std::min(std::abs(root.imag()), s.a), -root.imag());
    }
    d.near_circle = d.magnitude() < config.near_circle_rel_tol * s.a;
    return d;
}

} // namespace detail

/// r~ for real position x and imaginary extent y != 0.
inline ComplexDistance complex_distance(const Vec3& x, const Vec3& y, const GeometryConfig& config = {})
{
    const auto split = detail::axial_split(x, y);
    if (split.a == 0)
        throw Error(Errc::degenerate_extension, "complex distance requires y != 0 (a > 0)");
    return detail::distance_from_split(split, config);
}

/// Like complex_distance but y = 0 is served by the real distance r~ = r.
inline ComplexDistance extended_distance(const Vec3& x, const Vec3& y, const GeometryConfig& config = {})
{
    const auto split = detail::axial_split(x, y);
    if (split.a == 0) {
        ComplexDistance d;
        d.p = split.r;
        d.near_circle = split.r == 0;
        return d;
    }
    return detail::distance_from_split(split, config);
}

/// Oblate-spheroidal coordinates (p, q, phi) about the y axis, with the
/// cylindrical radius rho and axial coordinate x3 kept alongside.
struct SpheroidalCoords {
    double p = 0;
    double q = 0;
    double phi = 0;
    double rho = 0;
    double x3 = 0;
    double a = 0;
    double r = 0;

    // Residuals are relative to the largest term of the identity, since the
    // terms grow like (r/a)^2 when a << r.

    /// rho^2/(a^2+p^2) + x3^2/p^2 = 1; empty when p = 0.
    std::optional<double> spheroid_residual() const
    {
        if (p == 0)
            return std::nullopt;
        const double ratio = x3 / p;
        const double first = rho * rho / (a * a + p * p);
        const double second = ratio * ratio;
        return (first + second - 1.0) / std::max({first, second, 1.0});
    }

    /// rho^2/(a^2-q^2) - x3^2/q^2 = 1; empty when q = 0 or |q| = a.
    std::optional<double> hyperboloid_residual() const
    {
        // a^2 - q^2 = r^2 - p^2; the form with the smaller leading term
        // cancels less.
        const double aq = std::abs(q);
        const double gap = a <= r ? (a - aq) * (a + aq) : (r - p) * (r + p);
        if (q == 0 || gap == 0)
            return std::nullopt;
        const double ratio = x3 / q;
        const double first = rho * rho / gap;
        const double second = ratio * ratio;
        return (first - second - 1.0) / std::max({first, second, 1.0});
    }
};

inline SpheroidalCoords spheroidal_coords(const Vec3& x, const Vec3& y, const GeometryConfig& config = {})
{
    const auto split = detail::axial_split(x, y);
    if (split.a == 0)
        throw Error(Errc::degenerate_extension, "spheroidal coordinates require y != 0 (a > 0)");
    const auto d = detail::distance_from_split(split, config);

    SpheroidalCoords c;
    c.p = d.p;
    c.q = d.q;
    c.rho = split.rho;
    c.x3 = split.x3;
    c.a = split.a;
    c.r = split.r;
    if (split.rho > 0) {
        // Right-handed frame (e1, e2, y_hat); e1 is the x axis projected
        // orthogonally to y_hat unless y_hat is nearly along x.
        const Vec3 y_hat = (1.0 / split.a) * y;
        const Vec3 ref = std::abs(y_hat.x) > 0.9 ? Vec3{0, 1, 0} : Vec3{1, 0, 0};
        Vec3 e1 = ref - dot(ref, y_hat) * y_hat;
        e1 = (1.0 / norm(e1)) * e1;
        const Vec3 e2 = cross(y_hat, e1);
        c.phi = std::atan2(dot(x, e2), dot(x, e1));
    }
    return c;
}

enum class BranchRegion { regular, on_cut, on_circle };

inline const char* to_string(BranchRegion b) noexcept
{
    switch (b) {
    case BranchRegion::regular: return "regular";
    case BranchRegion::on_cut: return "on_cut";
    case BranchRegion::on_circle: return "on_circle";
    }
    return "unknown";
}

/// Locates x relative to the branch circle and cut disk with absolute
/// tolerance tol.
inline BranchRegion branch_classify(const Vec3& x, const Vec3& y, double tol)
{
    if (!(tol >= 0))
        throw Error(Errc::validation, "branch tolerance must be >= 0");
    const auto s = detail::axial_split(x, y);
    if (s.a == 0)
        return s.r < tol ? BranchRegion::on_circle : BranchRegion::regular;
    // |r~|^2 = |w| with w = r^2 - a^2 - 2 i a x3.
    const double modulus = std::sqrt(std::hypot((s.r - s.a) * (s.r + s.a), 2.0 * s.a * s.x3));
    if (modulus < tol)
        return BranchRegion::on_circle;
    if (std::abs(s.x3) <= tol && s.r <= s.a + tol)
        return BranchRegion::on_cut;
    return BranchRegion::regular;
}

/// Euclidean distance from x to the closed cut disk (which contains the
/// branch circle as its rim).
inline double distance_to_cut(const Vec3& x, const Vec3& y)
{
    const auto s = detail::axial_split(x, y);
    if (s.a == 0)
        return s.r;
    if (s.rho <= s.a)
        return std::abs(s.x3);
    return std::hypot(s.rho - s.a, s.x3);
}

/// r - i a cos(theta), the r >> a approximation of r~.
inline std::complex<double> far_zone_distance(const Vec3& x, const Vec3& y)
{
    const auto s = detail::axial_split(x, y);
    if (s.a == 0)
        throw Error(Errc::degenerate_extension, "far-zone distance requires y != 0 (a > 0)");
    if (s.r == 0)
        throw Error(Errc::undefined_direction, "far-zone distance requires x != 0");
    // cos(theta) = x_hat . y_hat = x3 / r
    return {s.r, -s.a * s.x3 / s.r};
}

} // namespace pulsebeam
