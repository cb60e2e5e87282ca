#include "catch_amalgamated.hpp"

#include "pulsebeam/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace pulsebeam;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Principal square root by polar decomposition, kept separate from the
// library's std::sqrt path.
std::complex<double> polar_sqrt(std::complex<double> w)
{
    const double modulus = std::hypot(w.real(), w.imag());
    const double arg = std::atan2(w.imag(), w.real());
    return std::polar(std::sqrt(modulus), 0.5 * arg);
}

Vec3 random_vec(std::mt19937_64& rng, double scale)
{
    std::normal_distribution<double> n(0, 1);
    std::uniform_real_distribution<double> len(0, scale);
    Vec3 v{n(rng), n(rng), n(rng)};
    return (len(rng) / norm(v)) * v;
}

} // namespace

TEST_CASE("complex_distance examples", "[geometry]")
{
    SECTION("on axis")
    {
        const auto d = complex_distance({0, 0, 3}, {0, 0, 1});
        CHECK_THAT(d.p, WithinRel(3.0, 1e-15));
        CHECK_THAT(d.q, WithinRel(1.0, 1e-15));
        CHECK_FALSE(d.on_cut);
    }
    SECTION("disk centre takes the x3 -> 0+ limit")
    {
        const auto d = complex_distance({0, 0, 0}, {0, 0, 1});
        CHECK(d.p == 0.0);
        CHECK(d.q == 1.0);
        CHECK(d.on_cut);
    }
    SECTION("generic point against the polar-form oracle")
    {
        const auto oracle = polar_sqrt({1.0, -2.0});
        const auto d = complex_distance({1, 0, 1}, {0, 0, 1});
        CHECK_THAT(d.p, WithinRel(oracle.real(), 1e-14));
        CHECK_THAT(d.q, WithinRel(-oracle.imag(), 1e-14));
        CHECK_THAT(d.p, WithinAbs(1.27202, 5e-6));
        CHECK_THAT(d.q, WithinAbs(0.78615, 5e-6));
        CHECK_THAT(d.p * d.p - d.q * d.q, WithinAbs(1.0, 1e-14));
        CHECK_THAT(d.p * d.q, WithinRel(1.0, 1e-14));
    }
    SECTION("y = 0 is a degenerate extension")
    {
        try {
            complex_distance({1, 0, 0}, {0, 0, 0});
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::degenerate_extension);
        }
    }
    SECTION("near_circle flag")
    {
        CHECK(complex_distance({1, 0, 0}, {0, 0, 1}).near_circle);
        CHECK_FALSE(complex_distance({1, 0, 1e-3}, {0, 0, 1}).near_circle);
        GeometryConfig loose{.near_circle_rel_tol = 1e-1};
        CHECK(complex_distance({1, 0, 1e-3}, {0, 0, 1}, loose).near_circle);
    }
}

TEST_CASE("extended_distance falls back to the real distance when y = 0", "[geometry]")
{
    const auto d = extended_distance({3, 4, 0}, {0, 0, 0});
    CHECK(d.p == 5.0);
    CHECK(d.q == 0.0);
}

TEST_CASE("complex distance identities hold on random samples", "[geometry][property]")
{
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100'000; ++i) {
        const Vec3 x = random_vec(rng, 10);
        const Vec3 y = random_vec(rng, 5);
        if (norm(y) == 0)
            continue;
        const auto d = complex_distance(x, y);
        const double r = norm(x), a = norm(y);
        const double x3 = dot(x, (1.0 / a) * y);
        INFO("x = (" << x.x << ", " << x.y << ", " << x.z << "), a = " << a);
        REQUIRE(d.p >= 0);
        REQUIRE(std::abs(d.p * d.p - d.q * d.q - (r * r - a * a)) <= 1e-12 * (r * r + a * a));
        REQUIRE(std::abs(d.p * d.q - a * x3) <= 1e-12 * std::abs(a * x3));
        REQUIRE(d.p <= r);
        REQUIRE(std::abs(d.q) <= a);
    }
}

TEST_CASE("bounds are attained exactly on the y axis, in both directions", "[geometry][property]")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> lam(-10, 10);
    for (int i = 0; i < 10'000; ++i) {
        const Vec3 y = random_vec(rng, 5);
        if (norm(y) == 0)
            continue;
        const double k = lam(rng);
        const Vec3 x = (k / norm(y)) * y;
        const auto d = complex_distance(x, y);
        if (d.on_cut)
            continue;
        REQUIRE_THAT(d.p, WithinRel(norm(x), 1e-12));
        REQUIRE_THAT(std::abs(d.q), WithinRel(norm(y), 1e-12));
        REQUIRE((k > 0 ? d.q > 0 : d.q < 0));
    }
}

TEST_CASE("q changes sign across the cut", "[geometry]")
{
    const Vec3 y{0, 0, 2};
    for (double rho : {0.0, 0.5, 1.0, 1.9}) {
        for (double eps : {1e-3, 1e-6, 1e-9}) {
            const auto above = complex_distance({rho, 0, eps}, y);
            const auto below = complex_distance({rho, 0, -eps}, y);
            CHECK_THAT(above.q, WithinRel(-below.q, 1e-12));
            CHECK_THAT(above.q, WithinRel(std::sqrt(4 - rho * rho), 1e-3));
            CHECK(above.p == below.p);
        }
    }
}

TEST_CASE("spheroidal_coords", "[geometry]")
{
    SECTION("on axis")
    {
        const auto c = spheroidal_coords({0, 0, 3}, {0, 0, 1});
        CHECK(c.rho == 0.0);
        CHECK(c.x3 == 3.0);
        CHECK(c.phi == 0.0);
    }
    SECTION("on the branch circle")
    {
        const auto c = spheroidal_coords({1, 0, 0}, {0, 0, 1});
        CHECK(c.rho == 1.0);
        CHECK(c.x3 == 0.0);
        CHECK(c.p == 0.0);
        CHECK(c.q == 0.0);
    }
    SECTION("generic point satisfies both quadric identities")
    {
        const auto c = spheroidal_coords({1, 0, 1}, {0, 0, 1});
        CHECK_THAT(c.rho, WithinRel(1.0, 1e-15));
        CHECK_THAT(c.x3, WithinRel(1.0, 1e-15));
        // direct substitution with the polar-form root
        const auto root = polar_sqrt({1.0, -2.0});
        const double p = root.real(), q = -root.imag();
        CHECK_THAT(1.0 / (1 + p * p) + 1.0 / (p * p), WithinAbs(1.0, 1e-14));
        CHECK_THAT(1.0 / (1 - q * q) - 1.0 / (q * q), WithinAbs(1.0, 1e-14));
        CHECK(std::abs(*c.spheroid_residual()) < 1e-10);
        CHECK(std::abs(*c.hyperboloid_residual()) < 1e-10);
    }
    SECTION("azimuth is measured about y")
    {
        const auto c = spheroidal_coords({0, 2, 1}, {0, 0, 1});
        CHECK_THAT(c.phi, WithinRel(std::numbers::pi / 2, 1e-15));
        const auto tilted = spheroidal_coords({0, 0, 1}, {1, 0, 0});
        CHECK(tilted.rho == 1.0);
        CHECK(tilted.x3 == 0.0);
    }
}

TEST_CASE("spheroid and hyperboloid residuals vanish off the axis and cut", "[geometry][property]")
{
    std::mt19937_64 rng(11);
    int tested = 0;
    while (tested < 10'000) {
        const Vec3 x = random_vec(rng, 10);
        const Vec3 y = random_vec(rng, 5);
        const double a = norm(y), r = norm(x);
        if (a < 1e-3 || r < 1e-3)
            continue;
        const auto c = spheroidal_coords(x, y);
        if (c.rho < 1e-2 * r || c.x3 == 0)
            continue;
        ++tested;
        INFO("x = (" << x.x << ", " << x.y << ", " << x.z << "), y = (" << y.x << ", " << y.y << ", " << y.z
                     << "), p = " << c.p << ", q = " << c.q << ", rho = " << c.rho << ", x3 = " << c.x3);
        REQUIRE(std::abs(*c.spheroid_residual()) <= 1e-10);
        REQUIRE(std::abs(*c.hyperboloid_residual()) <= 1e-10);
    }
}

TEST_CASE("branch_classify", "[geometry]")
{
    const Vec3 y{0, 0, 1};
    CHECK(branch_classify({1, 0, 0}, y, 1e-9) == BranchRegion::on_circle);
    CHECK(branch_classify({0.5, 0, 0}, y, 1e-9) == BranchRegion::on_cut);
    CHECK(branch_classify({0, 0, 5}, y, 1e-9) == BranchRegion::regular);
    CHECK(branch_classify({0.5, 0, 1e-3}, y, 1e-9) == BranchRegion::regular);
    CHECK(branch_classify({2, 0, 0}, y, 1e-9) == BranchRegion::regular);
    CHECK_THROWS_AS(branch_classify({0, 0, 1}, y, -1), Error);
}

TEST_CASE("distance_to_cut", "[geometry]")
{
    const Vec3 y{0, 0, 1};
    CHECK(distance_to_cut({0.5, 0, 0.25}, y) == 0.25);
    CHECK_THAT(distance_to_cut({2, 0, 1}, y), WithinRel(std::sqrt(2.0), 1e-15));
}

TEST_CASE("far_zone_distance", "[geometry]")
{
    const Vec3 y{0, 0, 1};
    CHECK(far_zone_distance({0, 0, 100}, y) == std::complex<double>(100, -1));
    CHECK(far_zone_distance({100, 0, 0}, y) == std::complex<double>(100, 0));
    CHECK_THROWS_AS(far_zone_distance({0, 0, 0}, y), Error);
    CHECK_THROWS_AS(far_zone_distance({1, 0, 0}, {0, 0, 0}), Error);

    SECTION("exact on the axis")
    {
        const auto exact = complex_distance({0, 0, 10}, y).value();
        CHECK(std::abs(exact - far_zone_distance({0, 0, 10}, y)) < 1e-14);
    }

    SECTION("off axis the error is a^2 sin^2(theta) / (2 r) to leading order and halves with r")
    {
        const double theta = std::numbers::pi / 3;
        const Vec3 dir{std::sin(theta), 0, std::cos(theta)};
        auto err = [&](double r) {
            return std::abs(complex_distance(r * dir, y).value() - far_zone_distance(r * dir, y));
        };
        CHECK_THAT(err(10), WithinRel(std::pow(std::sin(theta), 2) / 20, 0.05));
        for (double r : {50.0, 100.0, 400.0}) {
            const double ratio = err(2 * r) / err(r);
            CHECK(ratio >= 0.4);
            CHECK(ratio <= 0.6);
        }
    }
}
