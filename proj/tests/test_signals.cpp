#include "catch_amalgamated.hpp"

#include "pulsebeam/signals.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace pulsebeam;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

bool close_rel(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

// Reference values from a 40-digit evaluation of the Gaussian Cauchy integral.
const cplx gaussian_at_minus_half_i{0.3496188347203980698, 0.0};
const cplx gaussian_at_one_minus_half_i{0.2508879697952920535, -0.1769839116818110121};
const cplx gaussian_at_minus_i{0.2615782918651233717, 0.0};

} // namespace

TEST_CASE("delta-derivative analytic signals follow the closed form", "[signals]")
{
    SECTION("Cauchy kernel")
    {
        for (double t : {-2.0, 0.0, 0.7}) {
            for (double s : {-1.5, 0.25, 3.0}) {
                const cplx tau{t, -s};
                const cplx kernel = 1.0 / (cplx(0, 2 * pi) * tau);
                CHECK(close_rel(analytic_signal(DeltaDerivative{0}, {t, s}), kernel, 1e-15));
            }
        }
    }
    SECTION("first derivative at tau = -i is 1/(2 pi i)")
    {
        const cplx expected = 1.0 / cplx(0, 2 * pi);
        CHECK(close_rel(analytic_signal(DeltaDerivative{1}, {0, 1}), expected, 1e-15));
    }
    SECTION("order n is the tau-derivative of order n - 1")
    {
        const cplx tau{0.4, -1.3};
        const double h = 1e-5;
        for (int n = 1; n <= 8; ++n) {
            const auto lower = [&](cplx z) { return analytic_signal(DeltaDerivative{n - 1}, ComplexTime::from(z)); };
            const cplx fd = (lower(tau + h) - lower(tau - h)) / (2 * h);
            const cplx g = analytic_signal(DeltaDerivative{n}, ComplexTime::from(tau));
            INFO("n = " << n);
            CHECK(close_rel(g, fd, 1e-8));
        }
    }
    SECTION("tau = 0 is rejected")
    {
        try {
            analytic_signal(DeltaDerivative{0}, {0, 0});
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::non_analytic_point);
        }
    }
    SECTION("negative order is invalid")
    {
        CHECK_THROWS_AS(analytic_signal(DeltaDerivative{-1}, {0, 1}), Error);
    }
}

TEST_CASE("Gaussian analytic signal matches reference values", "[signals]")
{
    const DrivingSignal g = GaussianPulse{0, 1, 1};
    CHECK(close_rel(analytic_signal(g, {0, 0.5}), gaussian_at_minus_half_i, 1e-9));
    CHECK(close_rel(analytic_signal(g, {1, 0.5}), gaussian_at_one_minus_half_i, 1e-9));
    CHECK(close_rel(analytic_signal(g, {0, 1}), gaussian_at_minus_i, 1e-9));

    SECTION("conjugate symmetry: g(t + i s) = -conj(g(t - i s)) for real g0")
    {
        for (double t : {-1.0, 0.3, 2.0}) {
            for (double s : {0.2, 1.0}) {
                const cplx lower = analytic_signal(g, {t, s});
                const cplx upper = analytic_signal(g, {t, -s});
                CHECK(close_rel(upper, -std::conj(lower), 1e-9));
            }
        }
    }

    SECTION("real tau is not analytic")
    {
        try {
            analytic_signal(g, {0.5, 0});
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::non_analytic_point);
        }
    }

    SECTION("amplitude and shift act as expected")
    {
        const DrivingSignal shifted = GaussianPulse{2.0, 1, 3.0};
        CHECK(close_rel(analytic_signal(shifted, {3, 0.5}), 3.0 * gaussian_at_one_minus_half_i, 1e-9));
    }

    SECTION("invalid width")
    {
        CHECK_THROWS_AS(analytic_signal(GaussianPulse{0, 0, 1}, {0, 1}), Error);
        CHECK_THROWS_AS(analytic_signal(GaussianPulse{0, -1, 1}, {0, 1}), Error);
    }
}

TEST_CASE("quadrature failure surfaces as an accuracy error", "[signals]")
{
    SignalOptions opt;
    opt.rel_tol = 1e-15;
    opt.max_subintervals = 8;
    try {
        analytic_signal(GaussianPulse{0, 1, 1}, {0, 1e-4}, opt);
        FAIL("expected accuracy error");
    } catch (const AccuracyError& e) {
        CHECK(e.code() == Errc::accuracy);
        CHECK(std::isfinite(e.estimate()));
        CHECK(e.error_bound() > 0);
    }
}

TEST_CASE("sampled signals", "[signals]")
{
    SECTION("validation")
    {
        CHECK_THROWS_AS(SampledSignal({0.0}, {1.0}), Error);
        CHECK_THROWS_AS(SampledSignal({0.0, 1.0}, {1.0}), Error);
        CHECK_THROWS_AS(SampledSignal({0.0, 0.0}, {1.0, 2.0}), Error);
        CHECK_THROWS_AS(SampledSignal({1.0, 0.0}, {1.0, 2.0}), Error);
    }
    SECTION("linear interpolation, zero outside")
    {
        const SampledSignal s({0.0, 1.0, 3.0}, {0.0, 2.0, 0.0});
        CHECK(s(-0.1) == 0.0);
        CHECK(s(0.5) == 1.0);
        CHECK(s(2.0) == 1.0);
        CHECK(s(3.0) == 0.0);
        CHECK(s(3.1) == 0.0);
    }
    SECTION("Cauchy integral of a triangle against its antiderivative")
    {
        // g0 = 1 - |t| on [-1, 1]; Int (1 - |t'|)/(z - t') dt' in closed form
        const SampledSignal tri({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
        const cplx z{0.3, -0.4};
        const cplx lz = std::log(z), lzm = std::log(z - 1.0), lzp = std::log(z + 1.0);
        // Int_{-1}^{0} (1 + t)/(z - t) dt + Int_0^1 (1 - t)/(z - t) dt
        const cplx left = (1.0 + z) * (lzp - lz) - 1.0;
        const cplx right = (1.0 - z) * (lz - lzm) + 1.0;
        const cplx expected = (left + right) / cplx(0, 2 * pi);
        CHECK(close_rel(analytic_signal(tri, ComplexTime::from(z)), expected, 1e-9));
    }
    SECTION("real tau inside the support is rejected, outside is fine")
    {
        const SampledSignal s({0.0, 1.0}, {1.0, 1.0});
        try {
            analytic_signal(s, {0.5, 0});
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::non_analytic_point);
        }
        // (1/2 pi i) log((z)/(z - 1)) at z = 2
        const cplx v = analytic_signal(s, {2, 0});
        CHECK_THAT(v.imag(), WithinRel(-std::log(2.0) / (2 * pi), 1e-9));
        CHECK_THAT(v.real(), WithinAbs(0.0, 1e-15));
    }
    SECTION("CSV loading")
    {
        const auto path = std::filesystem::temp_directory_path() / "pulsebeam_sampled_test.csv";
        {
            std::ofstream out(path);
            out << "time,value\n0,0\n0.5,1\r\n1,0\n";
        }
        const auto s = SampledSignal::from_csv(path.string());
        CHECK(s.times() == std::vector<double>{0, 0.5, 1});
        CHECK(s.values() == std::vector<double>{0, 1, 0});
        {
            std::ofstream out(path);
            out << "0,0\n1,oops\n";
        }
        CHECK_THROWS_AS(SampledSignal::from_csv(path.string()), Error);
        std::filesystem::remove(path);
        try {
            SampledSignal::from_csv(path.string());
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::io);
        }
    }
}

TEST_CASE("Fourier transform of sampled signals matches direct quadrature", "[signals]")
{
    const SampledSignal s({-0.5, 0.1, 0.4, 1.7}, {0.0, 1.3, -0.6, 0.2});
    for (double w : {0.0, 1e-3, 0.3, 1.0, 2.5, 11.0, -4.0}) {
        // Independent oracle: adaptive quadrature of g0(t) e^{iwt} per segment.
        const std::vector<double> breaks(s.times().begin(), s.times().end());
        const auto ref = quad::integrate<cplx>([&](double t) { return s(t) * std::polar(1.0, w * t); },
                                               std::span<const double>(breaks), {.rel_tol = 1e-14});
        CHECK(std::abs(fourier_transform(s, w) - ref.value) <= 1e-13);
    }
}

TEST_CASE("spectral path reproduces the Cauchy kernel for delta", "[signals]")
{
    const cplx spectral = spectral_signal(DeltaDerivative{0}, 0, 1);
    CHECK(close_rel(spectral, analytic_signal(DeltaDerivative{0}, {0, 1}), 1e-12));
    CHECK_THAT(spectral.real(), WithinRel(1 / (2 * pi), 1e-12));

    for (int n = 0; n <= 6; ++n) {
        for (double t : {-1.0, 0.0, 2.0}) {
            for (double s : {0.5, -0.5, 2.0}) {
                INFO("n = " << n << ", t = " << t << ", s = " << s);
                CHECK(close_rel(spectral_signal(DeltaDerivative{n}, t, s),
                                analytic_signal(DeltaDerivative{n}, {t, s}), 1e-10));
            }
        }
    }
}

TEST_CASE("spectral path errors", "[signals]")
{
    try {
        spectral_signal(GaussianPulse{}, 0, 0);
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::domain);
    }
    CHECK_THROWS_AS(spectral_signal(DeltaDerivative{41}, 0, 1), AccuracyError);
}

TEST_CASE("Gaussian dual-path examples", "[signals]")
{
    const DrivingSignal g = GaussianPulse{0, 1, 1};
    CHECK(close_rel(analytic_signal(g, {0, 0.5}), spectral_signal(g, 0, 0.5), 1e-6));
    CHECK(close_rel(analytic_signal(g, {1, 0.5}), spectral_signal(g, 1, 0.5), 1e-6));
    CHECK(close_rel(spectral_signal(g, 1, 0.5), gaussian_at_one_minus_half_i, 1e-9));
}

TEST_CASE("quadrature and spectral paths agree on a (t, s) grid", "[signals][property]")
{
    const std::vector<GaussianPulse> pulses{{0, 1, 1}, {0.3, 0.7, 1.5}, {-1.0, 2.0, -0.4}};
    for (const auto& p : pulses) {
        for (double t = -4; t <= 4; t += 0.5) {
            for (double s : {0.1, 0.25, 0.5, 1.0, 2.0, 3.5, 5.0}) {
                for (double sign : {1.0, -1.0}) {
                    const cplx q = analytic_signal(p, {t, sign * s});
                    const cplx f = spectral_signal(p, t, sign * s);
                    INFO("pulse (" << p.center << ", " << p.width << "), t = " << t << ", s = " << sign * s);
                    REQUIRE(close_rel(q, f, 1e-6));
                }
            }
        }
    }

    SECTION("sampled signal")
    {
        const SampledSignal tri({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
        for (double t : {-2.0, 0.0, 0.4, 3.0}) {
            for (double s : {0.1, 0.5, 2.0}) {
                INFO("t = " << t << ", s = " << s);
                CHECK(close_rel(analytic_signal(tri, {t, s}), spectral_signal(tri, t, s), 1e-6));
            }
        }
    }
}

TEST_CASE("delta-derivative signals satisfy Cauchy-Riemann", "[signals][property]")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> re(-5, 5);
    std::uniform_real_distribution<double> im(0.1, 3);
    std::uniform_int_distribution<int> order(0, 4);
    std::bernoulli_distribution flip;
    for (int i = 0; i < 2000; ++i) {
        const DrivingSignal g = DeltaDerivative{order(rng)};
        const double x = re(rng);
        const double y = flip(rng) ? im(rng) : -im(rng);
        const double h = 1e-5 * std::abs(y);
        auto at = [&](double dx, double dy) { return analytic_signal(g, ComplexTime::from({x + dx, y + dy})); };
        const cplx dx = (at(h, 0) - at(-h, 0)) / (2 * h);
        const cplx dy = (at(0, h) - at(0, -h)) / (2 * h);
        // analytic in tau = x + i y: d/dx + i d/dy = 0
        INFO("tau = " << x << " + " << y << "i");
        REQUIRE(std::abs(dx + cplx(0, 1) * dy) <= 1e-8 * std::abs(dx));
    }
}

TEST_CASE("|g(t - i s)| does not increase with s for Gaussians", "[signals][property]")
{
    const std::vector<GaussianPulse> pulses{{0, 1, 1}, {1.5, 0.4, 2.0}, {-2, 3, 0.5}};
    for (const auto& p : pulses) {
        for (double dt : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            const double t = p.center + dt;
            double previous = std::numeric_limits<double>::infinity();
            for (double s = 0.05; s <= 6.0; s += 0.05) {
                const double m = std::abs(analytic_signal(p, {t, s}));
                INFO("t = " << t << ", s = " << s);
                REQUIRE(m <= previous * (1 + 1e-9));
                previous = m;
            }
        }
    }
}

TEST_CASE("boundary values connect analytically across a gap in the support", "[signals][property]")
{
    // g0 supported on [0, 1]; at t = 3 the two half-plane values are one
    // analytic function, so their difference closes linearly in eps.
    const SampledSignal s({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
    const cplx on_axis = analytic_signal(s, {3, 0});
    std::vector<double> gaps;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
        gaps.push_back(std::abs(analytic_signal(s, {3, eps}) - analytic_signal(s, {3, -eps})));
        CHECK(std::abs(analytic_signal(s, {3, eps}) - on_axis) <= 2 * eps * std::abs(on_axis));
    }
    for (std::size_t i = 1; i < gaps.size(); ++i)
        CHECK_THAT(gaps[i - 1] / gaps[i], WithinRel(10.0, 0.02));

    SECTION("the frequency-side path connects the same way")
    {
        const cplx below = spectral_signal(s, 3, 1e-2);
        const cplx above = spectral_signal(s, 3, -1e-2);
        CHECK(close_rel(below, analytic_signal(s, {3, 1e-2}), 1e-6));
        CHECK(std::abs(below - above) <= 0.05 * std::abs(on_axis));
        CHECK(std::abs(below - above) == Catch::Approx(gaps[1]).epsilon(1e-4));
    }
}

TEST_CASE("jump_of_signal recovers g0", "[signals]")
{
    const auto ladder = geometric_ladder(0.1, 8);
    const DrivingSignal g = GaussianPulse{0, 1, 1};

    const auto at0 = jump_of_signal(g, 0, ladder);
    CHECK_THAT(at0.value, WithinRel(1.0, 1e-9));
    CHECK(at0.imag_residual <= 1e-8);

    const auto at2 = jump_of_signal(g, 2, ladder);
    CHECK_THAT(at2.value, WithinRel(std::exp(-2.0), 1e-9));
    CHECK_THAT(at2.value, WithinAbs(0.13534, 5e-6));

    SECTION("ramp: zero where it vanishes, its value inside")
    {
        const SampledSignal ramp({1.0, 2.0}, {0.0, 1.0});
        CHECK_THAT(jump_of_signal(ramp, 0.5, ladder).value, WithinAbs(0.0, 1e-12));
        CHECK_THAT(jump_of_signal(ramp, 1.5, ladder).value, WithinRel(0.5, 1e-9));
    }

    SECTION("at the ramp's kink the eps log eps term defeats polynomial extrapolation and is reported")
    {
        const SampledSignal ramp({1.0, 2.0}, {0.0, 1.0});
        CHECK_THROWS_AS(jump_of_signal(ramp, 1.0, ladder), AccuracyError);
    }

    SECTION("ladder validation")
    {
        CHECK_THROWS_AS(jump_of_signal(g, 0, {0.1, 0.05}), Error);
        CHECK_THROWS_AS(jump_of_signal(g, 0, {0.1, 0.2, 0.05}), Error);
        CHECK_THROWS_AS(jump_of_signal(g, 0, {0.1, 0.05, 0.0}), Error);
    }
}
