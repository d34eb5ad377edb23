#include "fundnet/error.hpp"
#include "fundnet/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using fundnet::integrate;

TEST(Integrate, CubicToRoundoff)
{
    const double v = integrate([](double x) { return 3 * x * x * x - x + 2; }, -1.0, 2.0);
    EXPECT_NEAR(v, 3.0 * (16.0 - 1.0) / 4.0 - 1.5 + 6.0, 1e-11);
}

TEST(Integrate, SmoothTranscendental)
{
    EXPECT_NEAR(integrate([](double x) { return std::exp(-x) * std::cos(3 * x); }, 0.0, 10.0),
                (1.0 - std::exp(-10.0) * (std::cos(30.0) - 3 * std::sin(30.0))) / 10.0, 1e-10);
}

TEST(Integrate, EmptyOrReversedIntervalIsZero)
{
    EXPECT_EQ(integrate([](double) { return 1.0; }, 2.0, 2.0), 0.0);
    EXPECT_EQ(integrate([](double) { return 1.0; }, 3.0, 2.0), 0.0);
}

TEST(Integrate, JumpOnBreakpointIsResolved)
{
    auto step = [](double x) { return x >= 1.3 ? 2.0 : 0.5; };
    const std::vector<double> cuts{1.3};
    EXPECT_NEAR(integrate(step, 0.0, 3.0, cuts), 0.5 * 1.3 + 2.0 * 1.7, 1e-10);
}

TEST(Integrate, KinkOnBreakpoint)
{
    auto tent = [](double x) { return std::max(0.0, 1.0 - std::abs(x - 0.7)); };
    const std::vector<double> cuts{-0.3, 0.7, 1.7};
    EXPECT_NEAR(integrate(tent, -2.0, 3.0, cuts), 1.0, 1e-12);
}

TEST(Integrate, BreakpointsOutsideRangeAreIgnored)
{
    const std::vector<double> cuts{-5.0, 0.0, 1.0, 9.0};
    EXPECT_NEAR(integrate([](double x) { return x; }, 0.0, 1.0, cuts), 0.5, 1e-14);
}

TEST(Integrate, UnresolvedJumpReportsNonConvergence)
{
    auto step = [](double x) { return x >= 1.0 / 3.0 ? 1.0 : 0.0; };
    try
    {
        integrate(step, 0.0, 1.0);
        FAIL() << "expected QuadratureNonConvergence";
    }
    catch (const fundnet::Error& e)
    {
        EXPECT_EQ(e.kind(), fundnet::ErrorKind::QuadratureNonConvergence);
    }
}

TEST(Integrate, RelativeToleranceScalesWithMagnitude)
{
    fundnet::QuadratureOptions loose;
    loose.abs_tol = 1e-30;
    loose.rel_tol = 1e-9;
    const double v = integrate([](double x) { return 1e8 * std::exp(-x); }, 0.0, 5.0, {}, loose);
    EXPECT_NEAR(v / 1e8, 1.0 - std::exp(-5.0), 1e-9);
}

TEST(Integrate, BreakpointsOneUlpApartAreMerged)
{
    const double x = 28.277394635348866;
    const std::vector<double> cuts{x, std::nextafter(x, 100.0)};
    auto tent = [&](double v) { return std::max(0.0, 1.0 - std::abs(v - x) / 10.0); };
    EXPECT_NEAR(integrate(tent, 0.0, 67.8, cuts, {1e-12, 0.0}), 10.0, 1e-12);
}

TEST(Integrate, TightAbsoluteToleranceOnLongSmoothRange)
{
    const double v = integrate([](double x) { return std::exp(-x / 20.0); }, 0.0, 67.8, {}, {1e-13, 0.0});
    EXPECT_NEAR(v, 20.0 * (1.0 - std::exp(-67.8 / 20.0)), 1e-12);
}
