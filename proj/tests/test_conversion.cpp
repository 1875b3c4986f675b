#include "liqa/conversion.hpp"
#include "liqa/error.hpp"
#include "liqa/filter.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace liqa {
namespace {

const LumaImage& specimen()
{
    static const LumaImage img = test::photo("astronaut.png");
    return img;
}

const SpecimenSuite& gmsd_suite_unit_tau()
{
    static const SpecimenSuite suite = build_suite(specimen(), "astronaut", MetricKind::gmsd, 1.0);
    return suite;
}

TEST(SigmaGrid, StartsAtZeroAndIsGeometric)
{
    const auto g = sigma_grid(50, 0.25, 12.0);
    ASSERT_EQ(g.size(), 50u);
    EXPECT_EQ(g[0], 0.0);
    EXPECT_DOUBLE_EQ(g[1], 0.25);
    EXPECT_DOUBLE_EQ(g[49], 12.0);
    const double r = g[2] / g[1];
    for (std::size_t i = 2; i < g.size(); ++i) {
        EXPECT_NEAR(g[i] / g[i - 1], r, 1e-12);
    }
}

TEST(BuildSuite, Definitional)
{
    const auto& suite = gmsd_suite_unit_tau();
    ASSERT_EQ(suite.entries.size(), 50u);
    EXPECT_EQ(suite.entries[0].sigma_px, 0.0);
    EXPECT_EQ(suite.entries[0].xi, 0.0);
    EXPECT_NEAR(suite.entries[0].zeta_oriented, oriented_value(metric_id(MetricKind::gmsd), 0.0), 1e-12);
    for (std::size_t i = 0; i < suite.entries.size(); ++i) {
        EXPECT_EQ(suite.entries[i].xi, suite.entries[i].sigma_px / 2.5);
        if (i > 0) {
            EXPECT_GT(suite.entries[i].sigma_px, suite.entries[i - 1].sigma_px);
            EXPECT_GT(suite.entries[i].zeta_oriented, suite.entries[i - 1].zeta_oriented);
        }
    }
}

TEST(BuildSuite, TwentyPoints)
{
    SuiteOptions opts;
    opts.n = 20;
    const auto suite = build_suite(specimen(), "astronaut", MetricKind::gmsd, 1.0, opts);
    EXPECT_EQ(suite.entries.size(), 20u);
    EXPECT_EQ(build_table(suite).knots().size(), 20u);
}

TEST(BuildSuite, JobsDoNotChangeResult)
{
    SuiteOptions opts;
    opts.n = 20;
    opts.jobs = 3;
    const auto a = build_suite(specimen(), "astronaut", MetricKind::gmsd, 0.76, opts);
    opts.jobs = 1;
    const auto b = build_suite(specimen(), "astronaut", MetricKind::gmsd, 0.76, opts);
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        EXPECT_EQ(a.entries[i].zeta_oriented, b.entries[i].zeta_oriented);
    }
}

TEST(BuildSuite, Errors)
{
    EXPECT_THROW(build_suite(test::white_noise(511, 600, 1), "x", MetricKind::gmsd, 1.0), std::invalid_argument);
    EXPECT_THROW(build_suite(specimen(), "x", MetricKind::gmsd, 0.29), std::invalid_argument);
    EXPECT_THROW(build_suite(specimen(), "x", MetricKind::gmsd, 2.01), std::invalid_argument);
    SuiteOptions few;
    few.n = 19;
    EXPECT_THROW(build_suite(specimen(), "x", MetricKind::gmsd, 1.0, few), std::invalid_argument);
}

TEST(BuildSuite, FlatSpecimenIsNotMonotone)
{
    SuiteOptions opts;
    opts.n = 20;
    try {
        build_suite(test::constant_image(512, 512, 80.0), "flat", MetricKind::gmsd, 1.0, opts);
        FAIL() << "expected MonotonicityError";
    } catch (const MonotonicityError& e) {
        EXPECT_NE(std::string(e.what()).find("GMSD"), std::string::npos);
    }
}

TEST(ConversionTable, KnotValidationAndMerging)
{
    const MetricId id = metric_id(MetricKind::gmsd);
    EXPECT_THROW(ConversionTable(id, 1.0, {}, {}), std::invalid_argument);
    EXPECT_THROW(ConversionTable(id, 1.0, {{0.0, 0.0}, {0.1, -0.1}}, {}), std::invalid_argument);
    EXPECT_THROW(ConversionTable(id, 1.0, {{0.0, 0.5}, {0.1, 0.2}}, {}), std::invalid_argument);
    EXPECT_THROW(ConversionTable(id, 1.0, {{0.2, 0.0}, {0.1, 0.2}}, {}), std::invalid_argument);
    const ConversionTable t(id, 1.0, {{0.0, 0.0}, {0.1, 0.2}, {0.1 + 5e-13, 0.3}, {0.2, 0.5}}, {});
    ASSERT_EQ(t.knots().size(), 3u);
    EXPECT_EQ(t.knots()[1].second, 0.3);
}

TEST(ConversionTable, KnotPassThroughAndClamps)
{
    const auto table = build_table(gmsd_suite_unit_tau());
    const auto& k = table.knots();
    for (const auto& [zeta, xi] : k) {
        EXPECT_NEAR(table.convert(zeta).value(), xi, 1e-12);
    }
    EXPECT_EQ(table.convert(k.front().first).value(), 0.0);
    EXPECT_EQ(table.convert(k.front().first - 1.0).value(), 0.0);
    EXPECT_EQ(table.convert(k.back().first + 1.0).value(), k.back().second);
    EXPECT_NEAR(convert(table, k[25].first).value(), k[25].second, 1e-12);
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        const double mid = table.convert(0.5 * (k[i].first + k[i + 1].first)).value();
        EXPECT_GE(mid, k[i].second);
        EXPECT_LE(mid, k[i + 1].second);
    }
}

TEST(ConversionTable, AffineKnotsAreReproduced)
{
    std::vector<std::pair<double, double>> knots;
    for (int i = 0; i < 12; ++i) {
        const double z = 0.03 * i * i;
        knots.emplace_back(z, 2.0 * z + 0.1);
    }
    const ConversionTable t(metric_id(MetricKind::gmsd), 1.0, knots, {});
    for (int i = 0; i <= 1000; ++i) {
        const double z = knots.back().first * i / 1000.0;
        EXPECT_NEAR(t.convert(z).value(), 2.0 * z + 0.1, 1e-9);
    }
}

TEST(ConversionTable, JsonRoundTripIsExact)
{
    const auto table = build_table(gmsd_suite_unit_tau(), "cafebabe");
    test::TempDir dir("conv");
    table.save(dir / "t.json");
    const auto back = ConversionTable::load(dir / "t.json");
    EXPECT_EQ(back.metric(), table.metric());
    EXPECT_EQ(back.tau(), table.tau());
    EXPECT_EQ(back.knots(), table.knots());
    EXPECT_EQ(back.provenance().config_hash, "cafebabe");
    EXPECT_EQ(back.provenance().specimen_id, "astronaut");
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(table.knots().front().first - 0.01, table.knots().back().first + 0.01);
    for (int i = 0; i < 1000; ++i) {
        const double z = u(rng);
        EXPECT_EQ(back.convert(z).value(), table.convert(z).value());
    }
    EXPECT_EQ(ConversionTable::from_json(back.to_json()).to_json(), back.to_json());
}

TEST(ConversionTable, MalformedJson)
{
    EXPECT_THROW(ConversionTable::from_json("{"), ParseError);
    EXPECT_THROW(ConversionTable::from_json(R"({"version": 99})"), ParseError);
    EXPECT_THROW(ConversionTable::from_json(
                     R"({"version":1,"metric":"GMSD","orientation":"lower_is_better","tau":1,"knots":[[0,1],[1,0]]})"),
                 ParseError);
    EXPECT_THROW(ConversionTable::load("/nonexistent/table.json"), Error);
}

TEST(LiqaDmos, CompositionAndErrors)
{
    const auto table = build_table(gmsd_suite_unit_tau());
    const CanonicalParams p{1.0, 1.0, 2.5};
    EXPECT_EQ(liqa_dmos(table, p, oriented_value(metric_id(MetricKind::gmsd), 0.0)), 0.0);
    for (const auto& [zeta, xi] : table.knots()) {
        EXPECT_NEAR(liqa_dmos(table, p, zeta), canonical_dmos(p, NormalizedBlur(xi)), 1e-9);
    }
    EXPECT_THROW(liqa_dmos(table, {1.0, 0.76, 2.5}, 0.1), std::invalid_argument);
    double prev = -1.0;
    for (int i = 0; i <= 500; ++i) {
        const double v = liqa_dmos(table, p, 0.3 * i / 500.0);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

class SelfConsistency : public ::testing::TestWithParam<double> {};

TEST_P(SelfConsistency, GmsdAtGridSigmas)
{
    const double tau = GetParam();
    const auto suite = build_suite(specimen(), "astronaut", MetricKind::gmsd, tau);
    const auto table = build_table(suite);
    const CanonicalParams p{1.0, tau, 2.5};
    for (std::size_t i = 0; i < suite.entries.size(); i += 7) {
        const auto& e = suite.entries[i];
        const auto score = score_for_table(table, specimen(), gaussian_blur(specimen(), e.sigma_px));
        EXPECT_NEAR(liqa_dmos(table, p, oriented_value(score)), canonical_dmos(p, NormalizedBlur(e.xi)), 0.5)
            << "sigma " << e.sigma_px;
    }
}

INSTANTIATE_TEST_SUITE_P(Taus, SelfConsistency, ::testing::Values(0.44, 0.53, 0.60, 0.76, 1.0));

TEST(CrossImage, TransferWithinTolerance)
{
    const auto table = build_table(gmsd_suite_unit_tau());
    const CanonicalParams p{1.0, 1.0, 2.5};
    const auto other = test::photo("camera.png");
    for (double xi : {0.2, 0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        const auto score = score_for_table(table, other, gaussian_blur(other, 2.5 * xi));
        EXPECT_LE(std::abs(liqa_dmos(table, p, oriented_value(score)) - canonical_dmos(p, NormalizedBlur(xi))), 8.0)
            << "xi " << xi;
    }
}

TEST(Hashing, StableAndSensitive)
{
    EXPECT_EQ(fnv1a_hex("", 0), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a", 1), "af63dc4c8601ec8c");
    const auto a = test::white_noise(40, 40, 1);
    EXPECT_EQ(image_digest(a), image_digest(a));
    EXPECT_NE(image_digest(a), image_digest(a.plus(1e-9)));
    const SuiteOptions opts;
    EXPECT_NE(suite_config_hash(MetricKind::gmsd, 1.0, opts), suite_config_hash(MetricKind::gmsd, 0.76, opts));
    EXPECT_NE(suite_config_hash(MetricKind::gmsd, 1.0, opts), suite_config_hash(MetricKind::vifp, 1.0, opts));
    SuiteOptions more = opts;
    more.jobs = 4;
    EXPECT_EQ(suite_config_hash(MetricKind::gmsd, 1.0, opts), suite_config_hash(MetricKind::gmsd, 1.0, more));
}

}  // namespace
}  // namespace liqa
