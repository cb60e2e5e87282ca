#pragma once

// The acceptance suite: twelve property checks with pinned tolerances. Used
// by both the `acceptance` test binary and `pulsebeam verify`.

#include "pulsebeam/channel.hpp"
#include "pulsebeam/csv.hpp"
#include "pulsebeam/fieldcli.hpp"
#include "pulsebeam/geometry.hpp"
#include "pulsebeam/propagator.hpp"
#include "pulsebeam/signals.hpp"
#include "pulsebeam/wavelet.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace pulsebeam::verify {

struct Check {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline Vec3 random_vec(std::mt19937_64& rng, double scale)
{
    std::normal_distribution<double> n(0, 1);
    std::uniform_real_distribution<double> len(0, scale);
    Vec3 v{n(rng), n(rng), n(rng)};
    return (len(rng) / norm(v)) * v;
}

inline Vec3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0, 1);
    Vec3 v{n(rng), n(rng), n(rng)};
    return (1.0 / norm(v)) * v;
}

inline ConeVector random_interior(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> slack(1e-3, 2);
    const Vec3 y = random_vec(rng, 2);
    return ConeVector(y, norm(y) + slack(rng));
}

inline Check guarded(int id, std::string name, const std::function<Check()>& body)
{
    try {
        Check c = body();
        c.id = id;
        c.name = std::move(name);
        return c;
    } catch (const std::exception& e) {
        return {id, std::move(name), false, std::string("threw: ") + e.what()};
    }
}

} // namespace detail

inline Check algebraic_identities()
{
    return detail::guarded(1, "algebraic identities p^2 - q^2 = r^2 - a^2, pq = a x3", [] {
        std::mt19937_64 rng(1001);
        double worst_diff = 0, worst_prod = 0;
        for (int i = 0; i < 100'000; ++i) {
            const Vec3 x = detail::random_vec(rng, 10);
            const Vec3 y = detail::random_vec(rng, 5);
            if (norm(y) == 0)
                continue;
            const auto d = complex_distance(x, y);
            // The axial projection x3 is ill-conditioned when x is nearly
            // orthogonal to y; take it from the same split the distance uses.
            const auto c = spheroidal_coords(x, y);
            const double r = c.r, a = c.a;
            const double ax3 = a * c.x3;
            worst_diff = std::max(worst_diff, std::abs(d.p * d.p - d.q * d.q - (r * r - a * a)) / (r * r + a * a));
            const double prod = ax3 == 0 ? std::abs(d.p * d.q) : std::abs(d.p * d.q - ax3) / std::abs(ax3);
            worst_prod = std::max(worst_prod, prod);
        }
        const bool ok = worst_diff <= 1e-12 && worst_prod <= 1e-12;
        return Check{0, "", ok, "1e5 samples, max rel err " + detail::sci(worst_diff) + " / " + detail::sci(worst_prod)};
    });
}

inline Check distance_bounds()
{
    return detail::guarded(2, "bounds |p| <= r, |q| <= a with equality on the axis", [] {
        std::mt19937_64 rng(1002);
        bool ok = true;
        double worst_axis = 0, min_slack = 1;
        for (int i = 0; i < 100'000; ++i) {
            const Vec3 x = detail::random_vec(rng, 10);
            const Vec3 y = detail::random_vec(rng, 5);
            const double r = norm(x), a = norm(y);
            if (a == 0 || r == 0)
                continue;
            const auto d = complex_distance(x, y);
            ok = ok && d.p >= 0 && d.p <= r && std::abs(d.q) <= a;
            const double sine = norm(cross(x, y)) / (r * a);
            if (sine > 0.1) {
                ok = ok && d.p < r && std::abs(d.q) < a;
                min_slack = std::min({min_slack, (r - d.p) / r, (a - std::abs(d.q)) / a});
            }
        }
        std::uniform_real_distribution<double> k(-10, 10);
        for (int i = 0; i < 100'000; ++i) {
            const Vec3 y = detail::random_vec(rng, 5);
            const double a = norm(y), lambda = k(rng);
            if (a == 0 || lambda == 0)
                continue;
            const Vec3 x = (lambda / a) * y;
            const auto d = complex_distance(x, y);
            worst_axis = std::max({worst_axis, std::abs(d.p - norm(x)) / norm(x), std::abs(std::abs(d.q) - a) / a});
        }
        ok = ok && worst_axis <= 1e-12 && min_slack > 0;
        return Check{0, "", ok,
                     "2e5 samples, axis equality err " + detail::sci(worst_axis) + ", min off-axis slack "
                         + detail::sci(min_slack)};
    });
}

inline Check quadric_residuals()
{
    return detail::guarded(3, "spheroid and hyperboloid residuals", [] {
        std::mt19937_64 rng(1003);
        double worst = 0;
        int tested = 0;
        while (tested < 10'000) {
            const Vec3 x = detail::random_vec(rng, 10);
            const Vec3 y = detail::random_vec(rng, 5);
            if (norm(y) < 1e-3 || norm(x) < 1e-3 || branch_classify(x, y, 1e-9) != BranchRegion::regular)
                continue;
            const auto c = spheroidal_coords(x, y);
            // The hyperboloid degenerates on the axis (|q| = a) and the
            // spheroid at the disk (p = 0); sample the generic region.
            if (c.rho < 1e-2 * norm(x) || c.x3 == 0)
                continue;
            ++tested;
            worst = std::max({worst, std::abs(*c.spheroid_residual()), std::abs(*c.hyperboloid_residual())});
        }
        return Check{0, "", worst <= 1e-10, "1e4 regular points, max residual " + detail::sci(worst)};
    });
}

inline Check wave_equation_residual()
{
    return detail::guarded(4, "wave-equation residual converges at order >= 1.8", [] {
        std::mt19937_64 rng(1004);
        std::uniform_real_distribution<double> u(0, 1);
        const std::vector<double> steps{1e-2, 5e-3, 2.5e-3};
        double worst = 1e300;
        int tested = 0;
        for (const DrivingSignal& g : {DrivingSignal(DeltaDerivative{0}), DrivingSignal(GaussianPulse{0, 1, 1})}) {
            int count = 0;
            while (count < 20) {
                const double a = 0.3 + 0.7 * u(rng);
                const Vec3 y = a * detail::random_unit(rng);
                const double s = a + 0.5 + u(rng);
                const double r = 2 + 3 * u(rng);
                const Vec3 x = r * detail::random_unit(rng);
                if (distance_to_cut(x, y) < 0.5)
                    continue;
                const double t = r + 2 * u(rng) - 1;
                const auto fit = residual_convergence(g, RealEvent(x, t), ConeVector(y, s), steps);
                worst = std::min(worst, fit.order);
                ++count;
                ++tested;
            }
        }
        return Check{0, "", worst >= 1.8,
                     std::to_string(tested) + " points (delta and Gaussian), min order " + detail::sci(worst)};
    });
}

inline Check hyperfunction_jump()
{
    return detail::guarded(5, "boundary jump equals g0(t - r) / (4 pi r)", [] {
        const DrivingSignal g = GaussianPulse{0, 1, 1};
        const auto ladder = geometric_ladder(0.1, 8);
        const ConeVector y({0, 0, 0.5}, 1);
        double worst = 0;
        for (double r : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            for (double dt : {-1.5, -0.5, 0.0, 0.7, 1.5}) {
                const auto j = boundary_jump(g, RealEvent(r * Vec3{0.6, 0, 0.8}, r + dt), y, ladder);
                const double expected = std::exp(-0.5 * dt * dt) / (4 * std::numbers::pi * r);
                worst = std::max(worst, std::abs(j.value - expected) / expected);
            }
        }
        const auto ref = boundary_jump(g, RealEvent({0, 0, 2}, 2.5), y, ladder);
        const double expected = std::exp(-0.125) / (8 * std::numbers::pi);
        const double ref_err = std::abs(ref.value - expected) / expected;
        return Check{0, "", worst <= 1e-6 && ref_err <= 1e-6,
                     "5x5 grid max rel err " + detail::sci(worst) + ", r=2 t=2.5 rel err " + detail::sci(ref_err)};
    });
}

inline Check translation_invariance()
{
    return detail::guarded(6, "amplitude invariant under complex translations", [] {
        std::mt19937_64 rng(1006);
        std::uniform_real_distribution<double> u(0, 1), c(-1, 1);
        const DrivingSignal g = DeltaDerivative{0};
        double worst = 0;
        int tested = 0;
        while (tested < 1000) {
            const ConeVector ye = detail::random_interior(rng);
            const ConeVector yr = detail::random_interior(rng);
            const auto ch = make_channel(RealEvent({c(rng), c(rng), c(rng)}, c(rng)), ye,
                                         RealEvent({c(rng), c(rng), 6 + c(rng)}, 6 + 2 * c(rng)), yr);
            if (complex_distance(ch.separation().space(), ch.extent().space()).near_circle)
                continue;
            const FourVector eta = u(rng) * yr.vector() - u(rng) * ye.vector();
            const FourVector xi{{c(rng), c(rng), c(rng)}, c(rng)};
            const cplx before = channel_amplitude(ch, g);
            const cplx after = channel_amplitude(channel_translate(ch, xi, eta), g);
            worst = std::max(worst, std::abs(after - before) / std::abs(before));
            ++tested;
        }
        const auto a = make_channel(RealEvent({0.1, 0, 0}, 0), ConeVector({0, 0.3, 1}, 2), RealEvent({0, 0.5, 7}, 7.2),
                                    ConeVector({0.2, 0, 1}, 1.5));
        double trio = 0;
        for (const DrivingSignal& sig : {DrivingSignal(DeltaDerivative{0}), DrivingSignal(GaussianPulse{0.3, 0.8, 1.2})}) {
            const cplx wa = channel_amplitude(a, sig);
            trio = std::max({trio, std::abs(channel_amplitude(with_event_receiver(a), sig) - wa) / std::abs(wa),
                             std::abs(channel_amplitude(with_event_emitter(a), sig) - wa) / std::abs(wa)});
        }
        return Check{0, "", worst <= 1e-14 && trio <= 1e-14,
                     "1e3 translations max rel change " + detail::sci(worst) + ", A/B/C spread " + detail::sci(trio)};
    });
}

inline Check triangle_bandwidth()
{
    return detail::guarded(7, "triangle inequality and bandwidth chain", [] {
        std::mt19937_64 rng(1007);
        const RealEvent xe({0, 0, 0}, 0), xr({0, 0, 10}, 10);
        bool ok = true;
        double min_slack = 1e300;
        for (int i = 0; i < 10'000; ++i) {
            const auto m = channel_metrics(
                make_channel(xe, detail::random_interior(rng), xr, detail::random_interior(rng)));
            const double sum = m.emitter_duration + m.receiver_duration;
            min_slack = std::min(min_slack, (m.duration - sum) / sum);
            ok = ok && m.bandwidth <= (1 / sum) * (1 + 1e-12)
                && 1 / sum < std::min(m.emitter_bandwidth, m.receiver_bandwidth);
        }
        std::uniform_real_distribution<double> u(0.01, 2);
        double worst_parallel = 0;
        for (int i = 0; i < 10'000; ++i) {
            const Vec3 unit = detail::random_unit(rng);
            const double ae = u(rng), ar = u(rng);
            const auto m = channel_metrics(
                make_channel(xe, ConeVector(ae * unit, ae + u(rng)), xr, ConeVector(ar * unit, ar + u(rng))));
            const double sum = m.emitter_duration + m.receiver_duration;
            worst_parallel = std::max(worst_parallel, std::abs(m.duration - sum) / sum);
        }
        ok = ok && min_slack >= -1e-12 && worst_parallel <= 1e-12;
        return Check{0, "", ok,
                     "1e4 channels min rel slack " + detail::sci(min_slack) + ", parallel equality err "
                         + detail::sci(worst_parallel)};
    });
}

inline Check line_of_sight()
{
    return detail::guarded(8, "gain scan peaks uniquely on the line of sight", [] {
        const auto grid = symmetric_angle_grid(721);
        const auto scan = gain_scan(1, 2, 1, 2, 100, grid);
        const std::size_t mid = 360;
        bool ok = grid[mid] == 0.0;
        for (auto field : {&GainSample::peak, &GainSample::exact}) {
            for (std::size_t i = 0; i < scan.size(); ++i)
                if (i != mid)
                    ok = ok && scan[i].*field < scan[mid].*field;
            for (std::size_t i = mid + 1; i < scan.size(); ++i)
                ok = ok && scan[i].*field <= scan[i - 1].*field;
            for (std::size_t i = 0; i < mid; ++i)
                ok = ok && scan[i].*field <= scan[i + 1].*field;
        }
        return Check{0, "", ok, "721 angles, argmax at theta = 0, monotone on both sides (far-zone and exact)"};
    });
}

inline Check pattern_properties()
{
    return detail::guarded(9, "pattern has no sidelobes and F T is constant", [] {
        bool decreasing = true;
        double worst = 0;
        for (const auto& [s, a] : std::vector<std::pair<double, double>>{{2, 1}, {1.01, 1}, {5, 0.1}, {3, 2.9}}) {
            const auto prof = beam_profile(s, a, 1, half_angle_grid(10'001));
            const double ref = prof.samples[0].pattern * prof.samples[0].duration;
            for (std::size_t k = 1; k < prof.samples.size(); ++k) {
                decreasing = decreasing && prof.samples[k].pattern < prof.samples[k - 1].pattern;
                worst = std::max(worst, std::abs(prof.samples[k].pattern * prof.samples[k].duration - ref) / ref);
            }
        }
        return Check{0, "", decreasing && worst <= 1e-12,
                     std::string(decreasing ? "strictly decreasing" : "NOT decreasing") + ", F T spread "
                         + detail::sci(worst)};
    });
}

inline Check far_zone_convergence()
{
    return detail::guarded(10, "far-zone propagator converges at rate 1/r", [] {
        const double a = 1, s = 2;
        double worst_err = 0, worst_ratio_dev = 0;
        for (double theta : {0.3, 1.0, std::numbers::pi / 2, 2.2}) {
            const Vec3 dir{std::sin(theta), 0, std::cos(theta)};
            auto rel_err = [&](double r) {
                const auto exact = extended_propagator(r * dir, {0, 0, a}, r, s);
                const auto far = far_zone_propagator(r, theta, r, s, a);
                return std::abs(exact - far) / std::abs(far);
            };
            worst_err = std::max(worst_err, rel_err(100 * a));
            for (double r : {100.0, 200.0, 400.0})
                worst_ratio_dev = std::max(worst_ratio_dev, std::abs(rel_err(2 * r) / rel_err(r) - 0.5) / 0.5);
        }
        return Check{0, "", worst_err <= 0.02 && worst_ratio_dev <= 0.2,
                     "rel err at r = 100a " + detail::sci(worst_err) + ", halving deviation "
                         + detail::sci(worst_ratio_dev)};
    });
}

inline Check dual_path()
{
    return detail::guarded(11, "quadrature and spectral analytic signals agree", [] {
        double worst = 0;
        int n = 0;
        for (const auto& p : std::vector<GaussianPulse>{{0, 1, 1}, {0.3, 0.7, 1.5}, {-1.0, 2.0, -0.4}}) {
            for (double t = -4; t <= 4; t += 0.5) {
                for (double s : {0.1, 0.25, 0.5, 1.0, 2.0, 3.5, 5.0}) {
                    const cplx q = analytic_signal(p, {t, s});
                    const cplx f = spectral_signal(p, t, s);
                    worst = std::max(worst, std::abs(q - f) / std::abs(f));
                    ++n;
                }
            }
        }
        return Check{0, "", worst <= 1e-6, std::to_string(n) + " (t, s) points, max rel diff " + detail::sci(worst)};
    });
}

/// Built-in scenarios for the determinism check.
inline cli::RunConfig determinism_pattern_config()
{
    return cli::parse_config(nlohmann::json::parse(R"({"pattern": {"s": 2, "a": 1, "r": 100, "theta_count": 181}})"));
}

inline cli::RunConfig determinism_channel_config()
{
    return cli::parse_config(nlohmann::json::parse(R"({
        "channel": {"emitter": {"center": [0, 0, 0, 0], "extent": [0, 0, 1, 2]},
                    "receiver": {"center": [0, 0, 100, 100], "extent": [0, 0, 1, 2]}},
        "signal": {"type": "gaussian", "center": 0, "width": 1, "amplitude": 1}
    })"));
}

inline Check cli_determinism()
{
    return detail::guarded(12, "pattern and channel CSVs are byte-identical across runs and threads", [] {
        bool ok = true;
        for (auto [cmd, cfg] : {std::pair{cli::Subcommand::pattern, determinism_pattern_config()},
                                std::pair{cli::Subcommand::channel, determinism_channel_config()}}) {
            std::vector<std::string> outputs;
            for (int threads : {1, 1, 4, 4, 3}) {
                const auto out = cli::run(cmd, cfg, threads);
                outputs.push_back(csv::to_string(out.table) + (out.metrics ? csv::to_string(*out.metrics) : ""));
            }
            for (const auto& o : outputs)
                ok = ok && o == outputs.front();
        }
        return Check{0, "", ok, "threads 1, 1, 4, 4, 3"};
    });
}

inline std::vector<Check> run_all()
{
    return {algebraic_identities(), distance_bounds(),        quadric_residuals(),   wave_equation_residual(),
            hyperfunction_jump(),   translation_invariance(), triangle_bandwidth(),  line_of_sight(),
            pattern_properties(),   far_zone_convergence(),   dual_path(),           cli_determinism()};
}

inline std::string format(const Check& c)
{
    char head[16];
    std::snprintf(head, sizeof head, "%s %2d  ", c.passed ? "PASS" : "FAIL", c.id);
    return head + c.name + "  (" + c.detail + ")";
}

} // namespace pulsebeam::verify
