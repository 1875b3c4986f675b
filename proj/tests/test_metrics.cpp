#include "liqa/filter.hpp"
#include "liqa/metrics.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

namespace liqa {
namespace {

LumaImage map_samples(const LumaImage& img, double (*f)(double))
{
    std::vector<double> s(img.samples().begin(), img.samples().end());
    for (double& v : s) {
        v = f(v);
    }
    return LumaImage(img.width(), img.height(), std::move(s));
}

TEST(MetricNames, RoundTrip)
{
    for (MetricKind k : kAllMetrics) {
        EXPECT_EQ(parse_metric(metric_name(k)), k);
    }
    EXPECT_EQ(parse_metric("ms-ssim"), MetricKind::mssim);
    EXPECT_EQ(parse_metric("gmsd"), MetricKind::gmsd);
    EXPECT_EQ(parse_metric("vif"), MetricKind::vifp);
    EXPECT_THROW(parse_metric("fsim"), std::invalid_argument);
    EXPECT_EQ(metric_id(MetricKind::gmsd).orientation, Orientation::lower_is_better);
    EXPECT_EQ(metric_id(MetricKind::mssim).orientation, Orientation::higher_is_better);
    EXPECT_EQ(metric_id(MetricKind::vifp).orientation, Orientation::higher_is_better);
    EXPECT_EQ(parse_orientation(orientation_name(Orientation::lower_is_better)), Orientation::lower_is_better);
}

TEST(OrientedValue, Examples)
{
    EXPECT_EQ(oriented_value(metric_id(MetricKind::mssim), 1.0), -1.0);
    EXPECT_EQ(oriented_value(metric_id(MetricKind::gmsd), 0.12), 0.12);
    EXPECT_EQ(oriented_value(metric_id(MetricKind::vifp), 0.85), -0.85);
}

TEST(Metrics, IdentityGivesPerfectValue)
{
    const auto ref = test::photo("astronaut.png");
    EXPECT_NEAR(mssim(ref, ref).value, 1.0, 1e-9);
    EXPECT_NEAR(gmsd(ref, ref).value, 0.0, 1e-9);
    EXPECT_NEAR(vifp(ref, ref).value, 1.0, 1e-6);
    for (MetricKind k : kAllMetrics) {
        const auto s = compute_metric(k, ref, ref);
        EXPECT_NEAR(s.value, perfect_value(k), 1e-6);
        EXPECT_GT(s.valid_region_px, 0);
        EXPECT_LE(s.valid_region_px, static_cast<long>(ref.size()));
    }
}

TEST(Mssim, InversionScoresLow)
{
    const auto ref = test::photo("camera.png");
    const auto inv = map_samples(ref, [](double v) { return 255.0 - v; });
    EXPECT_LT(mssim(ref, inv).value, 0.3);
}

TEST(Gmsd, OffsetInvariant)
{
    const auto ref = test::photo("camera.png");
    EXPECT_NEAR(gmsd(ref, ref.plus(10.0)).value, 0.0, 1e-9);
}

TEST(Vifp, HeavyBlurScoresLow)
{
    const auto ref = test::photo("astronaut.png");
    EXPECT_LT(vifp(ref, gaussian_blur(ref, 8.0)).value, 0.2);
}

TEST(Vifp, ContrastEnhancementCanExceedOne)
{
    const auto ref = test::photo("astronaut.png");
    const double m = ref.mean();
    std::vector<double> s(ref.samples().begin(), ref.samples().end());
    for (double& v : s) {
        v = m + 1.2 * (v - m);
    }
    EXPECT_GT(vifp(ref, LumaImage(ref.width(), ref.height(), s)).value, 1.0);
}

TEST(Vifp, ConstantReferenceIsRejected)
{
    const auto flat = test::constant_image(256, 256, 90.0);
    EXPECT_THROW(vifp(flat, flat), std::exception);
}

TEST(Metrics, SizeAndShapeChecks)
{
    const auto a = test::white_noise(200, 200, 1);
    EXPECT_THROW(mssim(a, test::white_noise(200, 201, 1)), std::invalid_argument);
    EXPECT_THROW(mssim(test::white_noise(175, 300, 1), test::white_noise(175, 300, 1)), std::invalid_argument);
    EXPECT_THROW(gmsd(test::white_noise(31, 64, 1), test::white_noise(31, 64, 1)), std::invalid_argument);
    EXPECT_THROW(vifp(test::white_noise(127, 200, 1), test::white_noise(127, 200, 1)), std::invalid_argument);
    EXPECT_NO_THROW(mssim(test::white_noise(176, 176, 1), test::white_noise(176, 176, 2)));
    EXPECT_NO_THROW(gmsd(test::white_noise(32, 32, 1), test::white_noise(32, 32, 2)));
    EXPECT_NO_THROW(vifp(test::white_noise(128, 128, 1), test::white_noise(128, 128, 2)));
}

TEST(Metrics, TranslationInvariance)
{
    const auto ref = test::photo("brick.png");
    const auto deg = gaussian_blur(ref, 1.5);
    for (double k : {-10.0, -3.0, 4.0, 10.0}) {
        EXPECT_NEAR(mssim(ref.plus(k), deg.plus(k)).value, mssim(ref, deg).value, 1e-3) << k;
        EXPECT_NEAR(gmsd(ref.plus(k), deg.plus(k)).value, gmsd(ref, deg).value, 1e-3) << k;
    }
}

TEST(Metrics, Deterministic)
{
    const auto ref = test::photo("gravel.png");
    const auto deg = gaussian_blur(ref, 2.0);
    for (MetricKind k : kAllMetrics) {
        EXPECT_EQ(compute_metric(k, ref, deg).value, compute_metric(k, ref, deg).value);
    }
}

class BlurMonotonicity : public ::testing::TestWithParam<std::string> {};

TEST_P(BlurMonotonicity, OrientedValueIncreasesWithSigma)
{
    const auto ref = test::photo(GetParam());
    std::vector<LumaImage> blurred;
    for (double sigma : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        blurred.push_back(gaussian_blur(ref, sigma));
    }
    for (MetricKind k : kAllMetrics) {
        double prev = -INFINITY;
        for (std::size_t i = 0; i < blurred.size(); ++i) {
            const double z = oriented_value(compute_metric(k, ref, blurred[i]));
            EXPECT_GT(z, prev) << metric_name(k) << " step " << i;
            prev = z;
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Photos, BlurMonotonicity, ::testing::ValuesIn(test::photo_names()),
                         [](const auto& info) { return info.param.substr(0, info.param.find('.')); });

}  // namespace
}  // namespace liqa
