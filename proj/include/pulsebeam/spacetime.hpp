#pragma once

// Real and complexified spacetime points in c = 1 units.
//
// A complex event is z = x + i y (future tube, emitters) or z = x - i y
// (past tube, receivers) where y = (y_vec, s) lies in the future cone
// s > |y_vec|, or is exactly zero for an idealized point endpoint.

#include "pulsebeam/error.hpp"
#include "pulsebeam/vec3.hpp"

#include <cmath>
#include <string>

namespace pulsebeam {

/// Unconstrained 4-vector (space, time). Used for translations and raw
/// imaginary parts.
struct FourVector {
    Vec3 space;
    double time = 0;

    constexpr FourVector& operator+=(const FourVector& o) noexcept { space += o.space; time += o.time; return *this; }
    constexpr FourVector& operator-=(const FourVector& o) noexcept { space -= o.space; time -= o.time; return *this; }
    friend constexpr FourVector operator+(FourVector a, const FourVector& b) noexcept { return a += b; }
    friend constexpr FourVector operator-(FourVector a, const FourVector& b) noexcept { return a -= b; }
    friend constexpr FourVector operator*(double k, const FourVector& a) noexcept { return {k * a.space, k * a.time}; }
    friend constexpr bool operator==(const FourVector&, const FourVector&) = default;
};

inline bool is_finite(const FourVector& v) noexcept { return is_finite(v.space) && std::isfinite(v.time); }

/// A point of real spacetime. All components finite.
class RealEvent {
public:
    RealEvent() = default;
    RealEvent(const Vec3& space, double time) : RealEvent(FourVector{space, time}) {}
    explicit RealEvent(const FourVector& v) : v_(v)
    {
        if (!is_finite(v))
            throw Error(Errc::validation, "real event components must be finite");
    }

    const Vec3& space() const noexcept { return v_.space; }
    double time() const noexcept { return v_.time; }
    const FourVector& vector() const noexcept { return v_; }

    friend bool operator==(const RealEvent&, const RealEvent&) = default;

private:
    FourVector v_;
};

enum class ConeStatus { interior, null_endpoint, invalid };

inline const char* to_string(ConeStatus s) noexcept
{
    switch (s) {
    case ConeStatus::interior: return "interior";
    case ConeStatus::null_endpoint: return "null-endpoint";
    case ConeStatus::invalid: return "invalid";
    }
    return "unknown";
}

/// Classifies v against the open future cone. The comparison s > |y| is exact;
/// callers needing slack must inflate s themselves.
inline ConeStatus cone_status(const FourVector& v)
{
    if (!is_finite(v))
        throw Error(Errc::validation, "cone vector components must be finite");
    if (is_zero(v.space) && v.time == 0)
        return ConeStatus::null_endpoint;
    if (v.time > norm(v.space))
        return ConeStatus::interior;
    return ConeStatus::invalid;
}

/// Imaginary extension of an endpoint: interior of the future cone, or the
/// zero vector.
class ConeVector {
public:
    ConeVector() = default;
    ConeVector(const Vec3& space, double time) : ConeVector(FourVector{space, time}) {}
    explicit ConeVector(const FourVector& v) : v_(v), status_(cone_status(v))
    {
        if (status_ == ConeStatus::invalid)
            throw Error(Errc::cone_violation,
                        "extent (y, s) must satisfy s > |y| or be exactly zero; got s = "
                            + std::to_string(v.time) + ", |y| = " + std::to_string(norm(v.space)));
    }

    static ConeVector null() { return ConeVector{}; }

    const Vec3& space() const noexcept { return v_.space; }
    double time() const noexcept { return v_.time; }
    const FourVector& vector() const noexcept { return v_; }
    /// Aperture radius a = |y|.
    double aperture() const noexcept { return norm(v_.space); }
    ConeStatus status() const noexcept { return status_; }
    bool is_null() const noexcept { return status_ == ConeStatus::null_endpoint; }
    bool is_interior() const noexcept { return status_ == ConeStatus::interior; }

    friend bool operator==(const ConeVector& a, const ConeVector& b) noexcept { return a.v_ == b.v_; }

private:
    FourVector v_;
    ConeStatus status_ = ConeStatus::null_endpoint;
};

enum class Tube {
    future, ///< z = x + i y
    past,   ///< z = x - i y
};

struct ComplexEvent {
    RealEvent real;
    ConeVector imag;
    Tube tube = Tube::past;
};

/// z_r - z_e for a receiver in the past tube and an emitter in the future
/// tube. The result lies in the past tube with imaginary part y_r + y_e.
inline ComplexEvent tube_difference(const ComplexEvent& receiver, const ComplexEvent& emitter)
{
    if (receiver.tube != Tube::past)
        throw Error(Errc::validation, "receiver must lie in the past tube (z_r = x_r - i y_r)");
    if (emitter.tube != Tube::future)
        throw Error(Errc::validation, "emitter must lie in the future tube (z_e = x_e + i y_e)");
    const FourVector sum = receiver.imag.vector() + emitter.imag.vector();
    if (cone_status(sum) != ConeStatus::interior)
        throw Error(Errc::causality, "y_e + y_r must lie strictly inside the future cone");
    return {RealEvent(receiver.real.vector() - emitter.real.vector()), ConeVector(sum), Tube::past};
}

} // namespace pulsebeam
