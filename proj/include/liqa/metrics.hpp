#pragma once

#include "liqa/image.hpp"

#include <array>
#include <string>
#include <string_view>

namespace liqa {

enum class MetricKind { mssim, gmsd, vifp };
enum class Orientation { higher_is_better, lower_is_better };

struct MetricId {
    MetricKind kind = MetricKind::gmsd;
    Orientation orientation = Orientation::lower_is_better;

    friend bool operator==(const MetricId&, const MetricId&) = default;
};

inline constexpr std::array<MetricKind, 3> kAllMetrics{MetricKind::mssim, MetricKind::gmsd,
                                                       MetricKind::vifp};

MetricId metric_id(MetricKind kind) noexcept;

/// Canonical upper-case name ("MSSIM", "GMSD", "VIFP").
std::string_view metric_name(MetricKind kind) noexcept;
std::string_view orientation_name(Orientation o) noexcept;

/// Case-insensitive lookup; throws std::invalid_argument for unknown names.
MetricKind parse_metric(std::string_view name);
Orientation parse_orientation(std::string_view name);

struct MetricScore {
    MetricId id;
    double value = 0.0;       ///< the metric value zeta
    long valid_region_px = 0;  ///< pixels pooled after cropping filter borders
};

/// Five-scale MS-SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, L = 255, weights (0.0448, 0.2856, 0.3001, 0.2363, 0.1333),
/// 2x2 mean + decimation between scales. Contrast-structure terms at
/// scales 1-4 and full SSIM at scale 5 form a weighted geometric product;
/// negative terms are clamped to 0 before exponentiation.
/// Requires equal dimensions with the smaller side >= 176.
MetricScore mssim(const LumaImage& reference, const LumaImage& degraded);

/// Gradient magnitude similarity deviation: 2x2 mean + decimation, Prewitt
/// gradient magnitudes, similarity (2 m_r m_d + 170) / (m_r^2 + m_d^2 + 170),
/// score = sample standard deviation of the similarity map.
/// Requires equal dimensions with the smaller side >= 32.
MetricScore gmsd(const LumaImage& reference, const LumaImage& degraded);

/// Four-scale pixel-domain visual information fidelity with sigma_n^2 = 2.
/// Requires equal dimensions with the smaller side >= 128 and a
/// non-constant reference.
MetricScore vifp(const LumaImage& reference, const LumaImage& degraded);

MetricScore compute_metric(MetricKind kind, const LumaImage& reference, const LumaImage& degraded);

/// zeta oriented so that larger always means more degraded.
double oriented_value(const MetricScore& score) noexcept;
double oriented_value(MetricId id, double zeta) noexcept;

/// Perfect-quality value of a metric (1 for MSSIM/VIFP, 0 for GMSD).
double perfect_value(MetricKind kind) noexcept;

}  // namespace liqa
