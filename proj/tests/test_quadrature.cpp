#include "tdelay/error.hpp"
#include "tdelay/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace tdelay;

TEST_CASE("polynomials integrate exactly")
{
    auto low = [](double x) { return std::pow(x, 13) - 3 * x * x + 1; };
    const auto a = integrate_adaptive(low, 0.0, 1.0);
    CHECK(a.value == doctest::Approx(1.0 / 14).epsilon(1e-14));
    CHECK(a.intervals == 1);

    auto high = [](double x) { return std::pow(x, 21) - 3 * x * x + 1; };
    CHECK(integrate_adaptive(high, 0.0, 1.0).value == doctest::Approx(1.0 / 22).epsilon(1e-14));
}

TEST_CASE("reversed bounds flip the sign")
{
    auto f = [](double x) { return std::exp(x); };
    CHECK(integrate_adaptive(f, 1.0, 0.0).value == doctest::Approx(-(std::exp(1.0) - 1.0)).epsilon(1e-13));
    CHECK(integrate_adaptive(f, 0.5, 0.5).value == 0.0);
}

TEST_CASE("breakpoints catch a spike the first panel would miss")
{
    auto spike = [](double x) { return 1e-4 / ((x - 0.123456) * (x - 0.123456) + 1e-8); };
    const double exact = 1e-4 / 1e-4 * (std::atan((1.0 - 0.123456) / 1e-4) - std::atan((-1.0 - 0.123456) / 1e-4));
    const std::vector<double> cuts{0.123456};
    CHECK(integrate_adaptive(spike, -1.0, 1.0, {}, cuts).value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("non-finite integrand and bounds are rejected")
{
    auto bad = [](double x) { return 1.0 / x; };
    try {
        integrate_adaptive(bad, -1.0, 1.0);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::QuadratureFailure);
    }
    try {
        integrate_adaptive([](double) { return 1.0; }, 0.0, INFINITY);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFiniteWindow);
    }
}

TEST_CASE("interval budget is enforced")
{
    auto f = [](double x) { return std::sqrt(std::abs(x - 0.3)); };
    QuadratureOptions opts{1e-15, 0.0, 3};
    CHECK_THROWS_AS(integrate_adaptive(f, 0.0, 1.0, opts), Error);
}
