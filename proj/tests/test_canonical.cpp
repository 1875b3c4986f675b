#include "liqa/canonical.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace liqa {
namespace {

const double kRootHalf = std::sqrt(0.5);

TEST(NominalVd, Examples)
{
    EXPECT_NEAR(nominal_vd(440.0, 2160), 3438.0 * 440.0 / 2160.0, 1e-9);
    EXPECT_NEAR(nominal_vd(440.0, 2160), 700.0, 1.0);
    EXPECT_NEAR(nominal_vd(343.8, 3438), 343.8, 1e-9);
    EXPECT_NEAR(nominal_vd(300.0, 1000), 1031.4, 1e-9);
}

TEST(NominalVd, RejectsNonPositive)
{
    EXPECT_THROW(nominal_vd(0.0, 100), std::invalid_argument);
    EXPECT_THROW(nominal_vd(-1.0, 100), std::invalid_argument);
    EXPECT_THROW(nominal_vd(10.0, 0), std::invalid_argument);
}

TEST(ViewingGeometry, DerivesTau)
{
    const ViewingGeometry g(440.0, 2160, 700.0);
    EXPECT_NEAR(g.nominal_vd_mm(), 3438.0 * 440.0 / 2160.0, 1e-9 * g.nominal_vd_mm());
    EXPECT_NEAR(g.tau(), 700.0 / g.nominal_vd_mm(), 1e-12 * g.tau());
    EXPECT_THROW(ViewingGeometry(440.0, 2160, 7000.0), std::invalid_argument);
    EXPECT_THROW(ViewingGeometry(440.0, 2160, 50.0), std::invalid_argument);
    EXPECT_NO_THROW(ViewingGeometry(440.0, 2160, 7000.0, TauBounds{0.1, 20.0}));
    EXPECT_THROW(ViewingGeometry(440.0, 2160, -5.0), std::invalid_argument);
}

TEST(NormalizedBlur, Validation)
{
    EXPECT_THROW(NormalizedBlur{-0.1}, std::invalid_argument);
    EXPECT_THROW(NormalizedBlur{INFINITY}, std::invalid_argument);
    EXPECT_DOUBLE_EQ(NormalizedBlur::from_sigma_px(5.0).value(), 2.0);
    EXPECT_DOUBLE_EQ(NormalizedBlur::from_sigma_px(3.0, 1.5).value(), 2.0);
}

TEST(CanonicalParams, Validation)
{
    EXPECT_NO_THROW((CanonicalParams{3.0, 1.0, 2.5}.validate()));
    EXPECT_THROW((CanonicalParams{0.0, 1.0, 2.5}.validate()), std::invalid_argument);
    EXPECT_THROW((CanonicalParams{3.01, 1.0, 2.5}.validate()), std::invalid_argument);
    EXPECT_THROW((CanonicalParams{1.0, 0.0, 2.5}.validate()), std::invalid_argument);
    EXPECT_THROW((CanonicalParams{1.0, 1.0, 0.0}.validate()), std::invalid_argument);
}

TEST(Vntf, ZeroAtDc)
{
    EXPECT_EQ(vntf_magnitude(0.0), 0.0);
}

TEST(Vntf, PeakMatchesGridSearch)
{
    for (double s : {1.0, 2.5, 4.0}) {
        double best_rho = 0.0;
        double best = -1.0;
        for (int i = 1; i <= 200000; ++i) {
            const double rho = i * 1e-5;
            const double v = vntf_magnitude(rho, s);
            if (v > best) {
                best = v;
                best_rho = rho;
            }
        }
        EXPECT_NEAR(best_rho, vntf_peak_frequency(s), 2e-5);
        EXPECT_NEAR(vntf_peak_frequency(s), 1.0 / (s * std::sqrt(2.0)), 1e-15);
    }
}

TEST(Vntf, DecreasingBeyondPeak)
{
    const double peak = vntf_peak_frequency();
    double prev = vntf_magnitude(peak);
    for (int i = 1; i < 500; ++i) {
        const double v = vntf_magnitude(peak + i * 0.01);
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(PfiRatio, Examples)
{
    EXPECT_EQ(expected_pfi_ratio(NormalizedBlur(0.0)), 1.0);
    EXPECT_DOUBLE_EQ(expected_pfi_ratio(NormalizedBlur(1.0)), 0.5);
    EXPECT_NEAR(expected_pfi_ratio(NormalizedBlur(kRootHalf)), 2.0 / 3.0, 1e-15);
}

TEST(QualityLoss, Examples)
{
    EXPECT_EQ(quality_loss_index(NormalizedBlur(0.0)), 0.0);
    EXPECT_NEAR(quality_loss_index(NormalizedBlur(kRootHalf)), 0.18350, 1e-5);
    EXPECT_NEAR(quality_loss_index(NormalizedBlur(1.0)), 1.0 - 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_LT(quality_loss_index(NormalizedBlur(1e6)), 1.0);
    EXPECT_NEAR(quality_loss_index(NormalizedBlur(1e6)), 1.0 - 1e-6, 1e-12);
}

TEST(QualityLoss, RelatesToPfiRatio)
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int i = 0; i < 1000; ++i) {
        const NormalizedBlur xi(u(rng));
        EXPECT_NEAR(expected_pfi_ratio(xi) * (1.0 + xi.value() * xi.value()), 1.0, 1e-14);
        EXPECT_NEAR(quality_loss_index(xi), 1.0 - std::sqrt(expected_pfi_ratio(xi)), 1e-14);
    }
}

TEST(CanonicalDmos, Examples)
{
    EXPECT_NEAR(canonical_dmos({}, NormalizedBlur(kRootHalf)), 18.35, 0.005);
    for (double tau : {0.3, 0.76, 1.0, 2.0}) {
        EXPECT_EQ(canonical_dmos({1.0, tau, 2.5}, NormalizedBlur(0.0)), 0.0);
    }
    const double expected = 100.0 * 0.8 * (1.0 - 1.0 / std::sqrt(1.0 + 1.0 / std::pow(0.76, 4)));
    EXPECT_NEAR(canonical_dmos({0.8, 0.76, 2.5}, NormalizedBlur(1.0)), expected, 1e-12);
    EXPECT_NEAR(canonical_dmos({0.8, 0.76, 2.5}, NormalizedBlur(1.0)), 39.987, 5e-4);
}

TEST(CanonicalDmos, ReducesToQualityLossAtUnitTau)
{
    for (double xi : {0.1, 0.5, 1.0, 3.0}) {
        EXPECT_NEAR(canonical_dmos({1.7, 1.0, 2.5}, NormalizedBlur(xi)),
                    100.0 * 1.7 * quality_loss_index(NormalizedBlur(xi)), 1e-12);
    }
}

TEST(CanonicalDmos, JointRescalingInvariance)
{
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double q = u(rng) / 1.5;
        const double tau = u(rng);
        const double xi = u(rng);
        const double k = u(rng);
        const double a = canonical_dmos({q, tau, 2.5}, NormalizedBlur(xi));
        const double b = canonical_dmos({q, k * tau, 2.5}, NormalizedBlur(k * k * xi));
        EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, a));
    }
}

TEST(CanonicalDmos, MonotoneInXiAndTau)
{
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    const CanonicalParams p{1.0, 0.76, 2.5};
    for (int i = 0; i < 100; ++i) {
        const double xi = u(rng);
        const double h = 1e-6 * xi;
        EXPECT_GT(canonical_dmos(p, NormalizedBlur(xi + h)) - canonical_dmos(p, NormalizedBlur(xi - h)), 0.0);
        const double tau = 0.2 + u(rng) / 3.0;
        EXPECT_GT(canonical_dmos({1.0, tau, 2.5}, NormalizedBlur(xi)),
                  canonical_dmos({1.0, tau * 1.01, 2.5}, NormalizedBlur(xi)));
    }
}

TEST(CanonicalDmos, DipperPointByGridSearch)
{
    // Blur increment needed for a fixed DMOS step; its minimum is the dipper point.
    for (double tau : {1.0, 0.76}) {
        const CanonicalParams p{1.0, tau, 2.5};
        double best_xi = 0.0;
        double best = INFINITY;
        for (int i = 1; i <= 30000; ++i) {
            const double xi = i * 1e-4;
            const auto dxi = blur_increment_for_dmos_step(p, NormalizedBlur(xi), 0.01);
            ASSERT_TRUE(dxi.has_value());
            if (*dxi < best) {
                best = *dxi;
                best_xi = xi;
            }
        }
        EXPECT_NEAR(best_xi, kRootHalf * tau * tau, 2e-3) << "tau " << tau;
    }
}

TEST(BlurIncrement, ClosedFormAgreesWithForwardModel)
{
    const CanonicalParams p{0.9, 0.8, 2.5};
    const NormalizedBlur xi(0.6);
    const auto dxi = blur_increment_for_dmos_step(p, xi, 5.0);
    ASSERT_TRUE(dxi.has_value());
    EXPECT_NEAR(canonical_dmos(p, NormalizedBlur(xi.value() + *dxi)) - canonical_dmos(p, xi), 5.0, 1e-9);
    EXPECT_FALSE(blur_increment_for_dmos_step(p, xi, 200.0).has_value());
}

TEST(ScoringGain, Examples)
{
    EXPECT_NEAR(scoring_gain_from_anchor(100.0 * quality_loss_index(NormalizedBlur(kRootHalf)), NormalizedBlur(kRootHalf)),
                1.0, 1e-12);
    EXPECT_NEAR(scoring_gain_from_anchor(18.35, NormalizedBlur(kRootHalf)), 1.0, 1e-3);
    EXPECT_NEAR(scoring_gain_from_anchor(100.0, NormalizedBlur(1e6)), 1.0, 2e-6);
    EXPECT_NEAR(scoring_gain_from_anchor(100.0, NormalizedBlur(1e9)), 1.0, 1e-8);
}

TEST(ScoringGain, RoundTrip)
{
    std::mt19937 rng(14);
    std::uniform_real_distribution<double> uq(0.05, 1.0);
    std::uniform_real_distribution<double> ux(0.05, 10.0);
    for (int i = 0; i < 500; ++i) {
        const double q = uq(rng);
        const NormalizedBlur xi(ux(rng));
        const double d = canonical_dmos({q, 1.0, 2.5}, xi);
        EXPECT_NEAR(scoring_gain_from_anchor(d, xi), q, 1e-9);
    }
}

TEST(ScoringGain, Errors)
{
    EXPECT_THROW(scoring_gain_from_anchor(20.0, NormalizedBlur(0.0)), std::invalid_argument);
    EXPECT_THROW(scoring_gain_from_anchor(0.0, NormalizedBlur(1.0)), std::invalid_argument);
    EXPECT_THROW(scoring_gain_from_anchor(100.5, NormalizedBlur(1.0)), std::invalid_argument);
}

}  // namespace
}  // namespace liqa
