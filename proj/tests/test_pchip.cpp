#include "liqa/pchip.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace liqa {
namespace {

TEST(MonotoneCubic, Validation)
{
    EXPECT_THROW(MonotoneCubic({}, {}), std::invalid_argument);
    EXPECT_THROW(MonotoneCubic({0.0, 1.0}, {0.0}), std::invalid_argument);
    EXPECT_THROW(MonotoneCubic({0.0, 0.0}, {0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(MonotoneCubic({1.0, 0.0}, {0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(MonotoneCubic({0.0, 1.0}, {0.0, NAN}), std::invalid_argument);
}

TEST(MonotoneCubic, SingleKnotIsConstant)
{
    const MonotoneCubic f({2.0}, {5.0});
    EXPECT_EQ(f(-10.0), 5.0);
    EXPECT_EQ(f(2.0), 5.0);
    EXPECT_EQ(f(10.0), 5.0);
    EXPECT_EQ(f.derivative(2.0), 0.0);
}

TEST(MonotoneCubic, TwoKnotsAreLinear)
{
    const MonotoneCubic f({0.0, 2.0}, {1.0, 5.0});
    for (double t = 0.0; t <= 2.0; t += 0.125) {
        EXPECT_NEAR(f(t), 1.0 + 2.0 * t, 1e-14);
    }
}

TEST(MonotoneCubic, ReproducesAffineData)
{
    std::vector<double> x{-1.0, -0.3, 0.0, 0.4, 1.7, 2.0, 5.5};
    std::vector<double> y;
    for (double v : x) {
        y.push_back(0.7 * v + 2.0);
    }
    const MonotoneCubic f(x, y);
    for (int i = 0; i <= 1000; ++i) {
        const double t = -1.0 + 6.5 * i / 1000.0;
        EXPECT_NEAR(f(t), 0.7 * t + 2.0, 1e-9);
    }
}

TEST(MonotoneCubic, MatchesReferenceTangents)
{
    // Reference values from a standard shape-preserving implementation
    // (harmonic-mean interior slopes, three-point limited end slopes).
    const MonotoneCubic f({1.0, 2.0, 3.0, 4.0, 5.0}, {0.0, 1.0, 1.0, 3.0, 7.0});
    const auto d = f.tangents();
    ASSERT_EQ(d.size(), 5u);
    EXPECT_NEAR(d[0], 1.5, 1e-12);   // (3*1 - 0)/2
    EXPECT_NEAR(d[1], 0.0, 1e-12);   // flat neighbour
    EXPECT_NEAR(d[2], 0.0, 1e-12);
    EXPECT_NEAR(d[3], 8.0 / 3.0, 1e-12);  // harmonic mean of 2 and 4 with equal spacing
    EXPECT_NEAR(d[4], 5.0, 1e-12);   // (3*4 - 2)/2
    EXPECT_NEAR(f(2.5), 1.0, 1e-12);
}

TEST(MonotoneCubic, ExtremaGetZeroTangent)
{
    const MonotoneCubic f({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    EXPECT_EQ(f.tangents()[1], 0.0);
    for (double t = 0.0; t <= 2.0; t += 0.01) {
        EXPECT_LE(f(t), 1.0 + 1e-15);
        EXPECT_GE(f(t), -1e-15);
    }
}

TEST(MonotoneCubic, HoldsEndValuesOutsideSpan)
{
    const MonotoneCubic f({0.0, 1.0, 3.0}, {2.0, 4.0, 5.0});
    EXPECT_EQ(f(-1.0), 2.0);
    EXPECT_EQ(f(4.0), 5.0);
    EXPECT_EQ(f.derivative(4.0), 0.0);
}

TEST(MonotoneCubic, DerivativeMatchesFiniteDifference)
{
    const MonotoneCubic f({0.0, 0.5, 1.3, 2.0, 4.0}, {0.0, 0.2, 1.5, 1.7, 4.0});
    for (double t : {0.1, 0.7, 1.0, 1.9, 3.2}) {
        const double h = 1e-6;
        EXPECT_NEAR(f.derivative(t), (f(t + h) - f(t - h)) / (2 * h), 1e-6);
    }
}

class RandomMonotoneData : public ::testing::TestWithParam<int> {};

TEST_P(RandomMonotoneData, MonotoneAndInterpolating)
{
    std::mt19937 rng(static_cast<std::uint32_t>(GetParam()));
    std::uniform_real_distribution<double> step(1e-3, 1.0);
    std::uniform_int_distribution<int> flat(0, 4);
    std::vector<double> x{0.0};
    std::vector<double> y{0.0};
    for (int i = 1; i < 40; ++i) {
        x.push_back(x.back() + step(rng));
        y.push_back(y.back() + (flat(rng) == 0 ? 0.0 : step(rng) * step(rng) * 10.0));
    }
    const MonotoneCubic f(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_NEAR(f(x[i]), y[i], 1e-12);
    }
    std::uniform_real_distribution<double> t(x.front() - 1.0, x.back() + 1.0);
    std::vector<double> pts(10000);
    for (double& p : pts) {
        p = t(rng);
    }
    std::sort(pts.begin(), pts.end());
    double prev = -INFINITY;
    for (double p : pts) {
        const double v = f(p);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomMonotoneData, ::testing::Range(1, 6));

}  // namespace
}  // namespace liqa
