#pragma once

#include "liqa/blur_estimator.hpp"
#include "liqa/calibration.hpp"
#include "liqa/canonical.hpp"
#include "liqa/conversion.hpp"
#include "liqa/image.hpp"
#include "liqa/metrics.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace liqa {

enum class Distortion { blur, noise, jpeg, jpeg2000, blur_jpeg, blur_noise, other };

std::string_view distortion_name(Distortion d) noexcept;
/// Case-insensitive; common aliases ("gblur", "wn", "jp2k", ...) are accepted.
std::optional<Distortion> parse_distortion(std::string_view label);

/// One database row. Paths are absolute once loaded from a manifest.
struct EvalRecord {
    std::filesystem::path ref_path;
    std::filesystem::path deg_path;
    double dmos = 0.0;
    Distortion distortion = Distortion::other;
    std::string database_id;
};

struct Manifest {
    std::vector<EvalRecord> records;
    std::vector<std::string> warnings;
};

/// Reads a CSV manifest (header with ref, deg, dmos, distortion and an
/// optional database column) or a JSON array of objects with the same keys.
/// Relative paths resolve against the manifest's directory; unknown keys are
/// ignored; unknown distortion labels map to `other` with a warning.
/// Throws ParseError naming the offending row for malformed content.
Manifest load_manifest(const std::filesystem::path& path);

/// Blur records only: estimate_blur -> canonical_dmos.
struct CanonicalPipeline {
    BlurEstimatorOptions estimator;
};

/// metric (under the table's viewing-distance emulation) -> convert -> canonical_dmos.
struct LiqaPipeline {
    const ConversionTable* table = nullptr;
};

/// metric -> in-sample five-parameter logistic fit -> logistic_eval.
struct VqegPipeline {
    MetricKind metric = MetricKind::gmsd;
};

using Pipeline = std::variant<CanonicalPipeline, LiqaPipeline, VqegPipeline>;

std::string method_id(const Pipeline& pipeline);

struct IndexStats {
    long n = 0;
    double rmse = 0.0;
    std::optional<double> srocc;  ///< absent when undefined (n < 3 or constant data)
    std::optional<double> plcc;
};

struct Prediction {
    std::size_t record = 0;
    double predicted = 0.0;
    double actual = 0.0;
    Distortion distortion = Distortion::other;
    std::optional<double> metric_value;  ///< raw zeta for metric pipelines
    std::optional<double> xi;            ///< normalized blur, where the pipeline has one
};

struct SkipEntry {
    std::size_t record = 0;
    std::string reason;
};

struct EvalReport {
    std::string database_id;
    std::string method_id;
    CanonicalParams params;
    IndexStats overall;
    std::map<Distortion, IndexStats> per_distortion;
    std::vector<Prediction> predictions;  ///< ordered by record index
    std::vector<SkipEntry> skipped;       ///< records that failed to load or score
    long excluded = 0;                    ///< records outside the pipeline's scope
    std::optional<LogisticFit> logistic;  ///< VQEG pipeline only
};

struct EvalOptions {
    int jobs = 1;
    LumaWeights weights = kRec601Weights;
};

/// Predicts DMOS for every record and aggregates RMSE/SROCC/PLCC overall and
/// per distortion class. Unloadable records are skipped and logged. Results
/// do not depend on `jobs`.
/// Throws InsufficientDataError when no record can be scored and
/// std::invalid_argument when a LIQA table's tau differs from params.tau.
EvalReport evaluate(const std::vector<EvalRecord>& records, const Pipeline& pipeline,
                    const CanonicalParams& params, const EvalOptions& options = {});

IndexStats summarize(const std::vector<double>& predicted, const std::vector<double>& actual);

std::string to_json(const EvalReport& report);

/// actual_dmos,predicted_dmos,distortion rows for external plotting.
void write_scatter_csv(const EvalReport& report, std::ostream& out);

}  // namespace liqa
