#pragma once

#include "liqa/canonical.hpp"
#include "liqa/image.hpp"
#include "liqa/metrics.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace liqa {

struct Anchor {
    double dmos = 0.0;
    double xi = 0.0;
};

struct DisplayGeometry {
    double height_mm = 0.0;
    int rows = 0;
    std::optional<double> distance_mm;
};

/// One source of settings (built-in defaults, config file, environment or
/// flags). Unset fields defer to lower layers.
struct ConfigLayer {
    std::optional<double> s_g_arcmin;
    std::optional<MetricKind> metric;
    std::optional<std::filesystem::path> cache_dir;
    std::optional<std::filesystem::path> specimen;
    std::optional<Anchor> anchor;
    std::optional<double> q;
    std::optional<DisplayGeometry> geometry;
    std::optional<double> tau;
    std::optional<LumaWeights> weights;
    std::optional<int> table_points;
};

/// Fully resolved settings.
struct CliConfig {
    double s_g_arcmin = kDefaultNeuralSpreadArcmin;
    MetricKind metric = MetricKind::gmsd;
    std::filesystem::path cache_dir;
    std::filesystem::path specimen;
    std::optional<Anchor> anchor;
    std::optional<double> q;
    std::optional<DisplayGeometry> geometry;
    std::optional<double> tau;
    LumaWeights weights = kRec601Weights;
    int table_points = 50;

    /// Q from the anchor or explicit gain (default 1), tau from the geometry
    /// or explicit tau (default 1). Throws std::invalid_argument when the
    /// result is not a valid parameter set.
    CanonicalParams canonical_params() const;
};

/// Reads a JSON config file. Keys: s_g_arcmin, metric, cache_dir, specimen,
/// anchor {dmos, xi}, q, geometry {height_mm, rows, distance_mm}, tau,
/// luma_weights [r, g, b], table_points. Relative paths resolve against the
/// file's directory. Throws ParseError on malformed content.
ConfigLayer load_config_file(const std::filesystem::path& path);

/// LIQA_CACHE_DIR and LIQA_SPECIMEN.
ConfigLayer config_from_environment();

/// Built-in defaults: cache under $XDG_CACHE_HOME or $HOME/.cache, the
/// shipped specimen image.
ConfigLayer default_config();

/// Merges layers with flags > file > environment > defaults. The anchor and
/// explicit-Q group, and the geometry and explicit-tau group, are each taken
/// whole from the highest layer that sets any member; a layer setting both
/// members of a group is an error (std::invalid_argument).
CliConfig resolve_config(const ConfigLayer& flags, const ConfigLayer& file, const ConfigLayer& env,
                         const ConfigLayer& defaults);

/// Cache file for a conversion table: keyed by metric, tau rounded to 1e-3,
/// specimen digest and build-configuration digest.
std::filesystem::path table_cache_path(const std::filesystem::path& cache_dir, MetricKind metric, double tau,
                                       const std::string& specimen_hash, const std::string& config_hash);

}  // namespace liqa
