#pragma once

#include "pulsebeam/error.hpp"
#include "pulsebeam/spacetime.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>

namespace pulsebeam {

struct AxisSpec {
    double min = 0;
    double max = 0;
    std::int64_t count = 1;

    static AxisSpec fixed(double v) { return {v, v, 1}; }

    double at(std::int64_t i) const
    {
        if (count == 1)
            return min;
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

/// Sampling grid over (x1, x2, x3, t). Points are ordered row-major in that
/// axis order: x1 varies slowest, t fastest.
struct GridSpec {
    static constexpr std::array<const char*, 4> axis_names{"x1", "x2", "x3", "t"};

    std::array<AxisSpec, 4> axes{};
    std::int64_t max_points = 100'000'000;

    void validate() const
    {
        long double total = 1;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            const auto& ax = axes[i];
            const std::string name = axis_names[i];
            if (!std::isfinite(ax.min) || !std::isfinite(ax.max))
                throw Error(Errc::validation, "grid axis " + name + " bounds must be finite");
            if (ax.count < 1)
                throw Error(Errc::validation, "grid axis " + name + " needs count >= 1");
            if (ax.min > ax.max)
                throw Error(Errc::validation, "grid axis " + name + " needs min <= max");
            total *= static_cast<long double>(ax.count);
        }
        if (total > static_cast<long double>(max_points)) {
            std::ostringstream msg;
            msg << "grid has " << std::fixed << std::setprecision(0) << total << " points, above the cap of "
                << max_points;
            throw Error(Errc::validation, msg.str());
        }
    }

    std::int64_t size() const
    {
        std::int64_t n = 1;
        for (const auto& ax : axes)
            n *= ax.count;
        return n;
    }

    RealEvent point(std::int64_t index) const
    {
        std::array<double, 4> c{};
        for (std::size_t k = axes.size(); k-- > 0;) {
            const auto& ax = axes[k];
            c[k] = ax.at(index % ax.count);
            index /= ax.count;
        }
        return RealEvent({c[0], c[1], c[2]}, c[3]);
    }
};

} // namespace pulsebeam
