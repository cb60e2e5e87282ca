#include "catch_amalgamated.hpp"

#include "pulsebeam/quadrature.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace pulsebeam;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Gauss-Kronrod integrates smooth real and complex integrands", "[quadrature]")
{
    auto r = quad::integrate<double>([](double x) { return std::exp(-x * x); }, -10.0, 10.0, {.rel_tol = 1e-13});
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinRel(std::sqrt(std::numbers::pi), 1e-13));

    // Int_0^1 e^{i k x} dx
    const double k = 40;
    auto c = quad::integrate<std::complex<double>>(
        [k](double x) { return std::exp(std::complex<double>(0, k * x)); }, 0.0, 1.0, {.rel_tol = 1e-12});
    const auto exact = (std::exp(std::complex<double>(0, k)) - 1.0) / std::complex<double>(0, k);
    CHECK(c.converged);
    CHECK(std::abs(c.value - exact) < 1e-12 * std::abs(exact));
}

TEST_CASE("adaptive subdivision resolves a narrow Lorentzian", "[quadrature]")
{
    const double eps = 1e-4;
    auto f = [eps](double x) { return eps / (x * x + eps * eps); };
    auto r = quad::integrate<double>(f, -1.0, 1.0, {.rel_tol = 1e-10});
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinRel(2 * std::atan(1 / eps), 1e-10));
}

TEST_CASE("non-convergence is reported, not hidden", "[quadrature]")
{
    auto f = [](double x) { return std::sqrt(std::abs(x)); };
    auto r = quad::integrate<double>(f, -1.0, 1.0, {.rel_tol = 1e-14, .abs_tol = 0, .max_subintervals = 10});
    CHECK_FALSE(r.converged);
    CHECK(r.error > 0);

    auto g = [](double x) { return 1.0 / std::sqrt(std::abs(x)); };
    CHECK_FALSE(quad::integrate<double>(g, -1.0, 1.0).converged);
}

TEST_CASE("breakpoints split the domain", "[quadrature]")
{
    const std::vector<double> breaks{0.0, 0.5, 1.0, 3.0};
    auto r = quad::integrate<double>([](double x) { return x < 1 ? 1.0 : 2.0; }, std::span<const double>(breaks));
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinRel(5.0, 1e-14));
}

TEST_CASE("Gauss-Legendre rule is exact for polynomials up to degree 2n-1", "[quadrature]")
{
    for (int n : {1, 2, 5, 16, 20}) {
        const auto rule = quad::gauss_legendre(n);
        double wsum = 0;
        for (double w : rule.weights)
            wsum += w;
        CHECK_THAT(wsum, WithinRel(2.0, 1e-14));
        const int deg = 2 * n - 2; // even degree, exact integral 2/(deg+1)
        double s = 0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * std::pow(rule.nodes[i], deg);
        CHECK_THAT(s, WithinRel(2.0 / (deg + 1), 1e-13));
    }
}

TEST_CASE("Neville extrapolation recovers polynomial limits", "[quadrature]")
{
    const std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> v;
    for (double x : h)
        v.push_back(2.0 + 3.0 * x - 5.0 * x * x + 0.5 * x * x * x);
    const auto ex = quad::extrapolate_to_zero<double>(h, v);
    CHECK_THAT(ex.value, WithinAbs(2.0, 1e-13));

    // smooth non-polynomial: exp(h) -> 1
    std::vector<double> e;
    for (double x : h)
        e.push_back(std::exp(x));
    const auto ex2 = quad::extrapolate_to_zero<double>(h, e);
    CHECK_THAT(ex2.value, WithinAbs(1.0, 1e-7));
    CHECK(ex2.error < 1e-5);
}
