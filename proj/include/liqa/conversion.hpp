#pragma once

#include "liqa/canonical.hpp"
#include "liqa/image.hpp"
#include "liqa/metrics.hpp"
#include "liqa/pchip.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace liqa {

struct SuiteEntry {
    double sigma_px = 0.0;
    double xi = 0.0;
    double zeta_oriented = 0.0;
};

/// Metric values of a specimen under a grid of Gaussian blurs at one
/// normalized viewing distance.
struct SpecimenSuite {
    std::string specimen_id;
    MetricId metric;
    double tau = 1.0;
    std::vector<SuiteEntry> entries;
};

struct SuiteOptions {
    int n = 50;
    double sigma_min_px = 0.25;  ///< first nonzero grid value
    double sigma_max_px = 12.0;
    double s_g_px = kDefaultNeuralSpreadArcmin;
    int jobs = 1;
};

/// 0 followed by n-1 geometrically spaced values over [sigma_min, sigma_max].
std::vector<double> sigma_grid(int n, double sigma_min_px, double sigma_max_px);

/// Blurs the specimen over sigma_grid, emulates the viewing distance by
/// resampling specimen and blurred copy by 1/tau, and records the oriented
/// metric value per grid point.
///
/// Requires a specimen of at least 512x512, tau in [0.3, 2] and n >= 20.
/// Throws MonotonicityError when the oriented metric is not strictly
/// increasing over the grid.
SpecimenSuite build_suite(const LumaImage& specimen, std::string specimen_id, MetricKind metric,
                          double tau, const SuiteOptions& options = {});

struct TableProvenance {
    std::string specimen_id;
    std::string built_at;     ///< ISO-8601 UTC
    std::string config_hash;  ///< hex digest of the build configuration
};

/// Monotone map from oriented metric value to normalized blur for one
/// (metric, tau) pair.
class ConversionTable {
public:
    static constexpr int kFormatVersion = 1;

    /// Knots must be ordered by nondecreasing zeta with nondecreasing,
    /// nonnegative xi. Knots whose zeta differ by at most 1e-12 are merged,
    /// keeping the larger xi. Throws std::invalid_argument otherwise.
    ConversionTable(MetricId metric, double tau, std::vector<std::pair<double, double>> knots,
                    TableProvenance provenance);

    MetricId metric() const noexcept { return metric_; }
    double tau() const noexcept { return tau_; }
    const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }
    const MonotoneCubic& interpolant() const noexcept { return interp_; }
    const TableProvenance& provenance() const noexcept { return provenance_; }

    /// Equivalent normalized blur of an oriented metric value. Values below
    /// the first knot map to 0, values beyond the last knot to the last xi.
    NormalizedBlur convert(double zeta_oriented) const noexcept;

    std::string to_json() const;
    static ConversionTable from_json(const std::string& text);

    void save(const std::filesystem::path& path) const;
    static ConversionTable load(const std::filesystem::path& path);

private:
    MetricId metric_;
    double tau_;
    std::vector<std::pair<double, double>> knots_;
    MonotoneCubic interp_;
    TableProvenance provenance_;
};

/// Fits the monotone interpolant through the suite's (zeta, xi) pairs.
ConversionTable build_table(const SpecimenSuite& suite, std::string config_hash = {});

NormalizedBlur convert(const ConversionTable& table, double zeta_oriented) noexcept;

/// Linearized DMOS: canonical_dmos(params, convert(table, zeta)).
/// Throws std::invalid_argument when table and params disagree on tau by
/// more than 1e-6.
double liqa_dmos(const ConversionTable& table, const CanonicalParams& params, double zeta_oriented);

/// Evaluates the table's metric on a pair under the same viewing-distance
/// emulation used to build the table (both images resampled by 1/tau).
MetricScore score_for_table(const ConversionTable& table, const LumaImage& reference,
                            const LumaImage& degraded);

/// 64-bit FNV-1a digest as 16 hex digits.
std::string fnv1a_hex(const void* data, std::size_t size);
std::string image_digest(const LumaImage& image);

/// Digest of everything besides the specimen that determines a suite.
std::string suite_config_hash(MetricKind metric, double tau, const SuiteOptions& options);

}  // namespace liqa
