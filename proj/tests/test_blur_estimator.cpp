#include "liqa/blur_estimator.hpp"
#include "liqa/error.hpp"
#include "liqa/filter.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace liqa {
namespace {

TEST(EstimateBlur, IdentityGivesZero)
{
    const auto ref = test::photo("astronaut.png");
    const auto est = estimate_blur(ref, ref);
    EXPECT_EQ(est.sigma_px, 0.0);
    EXPECT_EQ(est.xi, 0.0);
    EXPECT_GE(est.bins_used, 4);
}

TEST(EstimateBlur, RecoversSigmaThree)
{
    const auto ref = test::photo("astronaut.png");
    const auto est = estimate_blur(ref, gaussian_blur(ref, 3.0));
    EXPECT_GE(est.sigma_px, 2.85);
    EXPECT_LE(est.sigma_px, 3.15);
    EXPECT_NEAR(est.xi, est.sigma_px / 2.5, 1e-12);
    EXPECT_GE(est.fit_r2, 0.0);
    EXPECT_LE(est.fit_r2, 1.0);
}

TEST(EstimateBlur, AddedNoiseClampsToZero)
{
    const auto ref = test::photo("camera.png");
    const auto noise = test::white_noise(ref.width(), ref.height(), 21, 0.0, 10.0);
    std::vector<double> s(ref.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = ref.samples()[i] + noise.samples()[i];
    }
    const auto est = estimate_blur(ref, LumaImage(ref.width(), ref.height(), s));
    EXPECT_EQ(est.sigma_px, 0.0);
    EXPECT_LT(est.fit_r2, 0.5);
}

TEST(EstimateBlur, MonotoneInSigma)
{
    const auto ref = test::photo("grass.png");
    double prev = 0.0;
    for (double sigma : {0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0}) {
        const double s = estimate_blur(ref, gaussian_blur(ref, sigma)).sigma_px;
        EXPECT_GT(s, prev) << "sigma " << sigma;
        prev = s;
    }
}

TEST(EstimateBlur, ContentIndependence)
{
    for (double sigma : {1.0, 2.0, 4.0}) {
        const auto a = test::photo("astronaut.png");
        const auto b = test::photo("brick.png");
        const double sa = estimate_blur(a, gaussian_blur(a, sigma)).sigma_px;
        const double sb = estimate_blur(b, gaussian_blur(b, sigma)).sigma_px;
        EXPECT_LT(std::abs(sa - sb) / sigma, 0.10) << "sigma " << sigma;
    }
}

TEST(EstimateBlur, NonSquareImages)
{
    const auto full = test::photo("gravel.png");
    std::vector<double> s;
    for (int y = 0; y < 256; ++y) {
        for (int x = 0; x < 512; ++x) {
            s.push_back(full.at(x, y));
        }
    }
    const LumaImage wide(512, 256, s);
    const double est = estimate_blur(wide, gaussian_blur(wide, 2.0)).sigma_px;
    EXPECT_NEAR(est, 2.0, 0.1);
}

TEST(EstimateBlur, Errors)
{
    const auto a = test::white_noise(64, 64, 1);
    EXPECT_THROW(estimate_blur(a, test::white_noise(64, 65, 1)), std::invalid_argument);
    EXPECT_THROW(estimate_blur(test::white_noise(63, 63, 1), test::white_noise(63, 63, 1)), std::invalid_argument);
    BlurEstimatorOptions bad;
    bad.rho_min = 0.3;
    bad.rho_max = 0.2;
    EXPECT_THROW(estimate_blur(a, a, bad), std::invalid_argument);
    bad.rho_min = 0.0;
    EXPECT_THROW(estimate_blur(a, a, bad), std::invalid_argument);
    bad.rho_min = 0.1;
    bad.rho_max = 0.6;
    EXPECT_THROW(estimate_blur(a, a, bad), std::invalid_argument);

    BlurEstimatorOptions narrow;
    narrow.rho_min = 0.100;
    narrow.rho_max = 0.101;
    EXPECT_THROW(estimate_blur(a, a, narrow), InsufficientDataError);

    const auto flat = test::constant_image(64, 64, 50.0);
    EXPECT_THROW(estimate_blur(flat, flat), InsufficientDataError);
}

}  // namespace
}  // namespace liqa
