#pragma once

#include <stdexcept>
#include <string>

namespace pulsebeam {

/// Failure categories. The CLI maps `accuracy` to exit code 2, `io` to 3
/// and everything else to 1.
enum class Errc {
    validation,
    causality,
    cone_violation,
    degenerate_extension,
    undefined_direction,
    non_analytic_point,
    domain,
    singularity,
    stencil_placement,
    accuracy,
    io,
};

inline const char* to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::validation: return "validation";
    case Errc::causality: return "causality";
    case Errc::cone_violation: return "cone-violation";
    case Errc::degenerate_extension: return "degenerate-extension";
    case Errc::undefined_direction: return "undefined-direction";
    case Errc::non_analytic_point: return "non-analytic-point";
    case Errc::domain: return "domain";
    case Errc::singularity: return "singularity";
    case Errc::stencil_placement: return "stencil-placement";
    case Errc::accuracy: return "accuracy";
    case Errc::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + " error: " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Numerical procedure did not reach its target; carries the best estimate
/// obtained and its error bound.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate, double error_bound)
        : Error(Errc::accuracy, what + " (estimate " + std::to_string(estimate) + ", error bound "
                                    + std::to_string(error_bound) + ")"),
          estimate_(estimate), error_bound_(error_bound)
    {
    }

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

} // namespace pulsebeam
