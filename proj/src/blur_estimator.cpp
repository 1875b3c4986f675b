#include "liqa/blur_estimator.hpp"

#include "liqa/error.hpp"
#include "liqa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace liqa {

BlurEstimate estimate_blur(const LumaImage& reference, const LumaImage& degraded,
                           const BlurEstimatorOptions& options)
{
    if (reference.width() != degraded.width() || reference.height() != degraded.height()) {
        throw std::invalid_argument("estimate_blur: image dimensions differ");
    }
    if (reference.width() < 64 || reference.height() < 64) {
        throw std::invalid_argument("estimate_blur: images must be at least 64x64");
    }
    if (!(options.rho_min > 0.0 && options.rho_min < options.rho_max && options.rho_max <= 0.5)) {
        throw std::invalid_argument("estimate_blur: band must satisfy 0 < rho_min < rho_max <= 0.5");
    }

    const RadialSpectrum ref = radial_power_spectrum(reference, options.n_bins);
    const RadialSpectrum deg = radial_power_spectrum(degraded, options.n_bins);

    const double floor = options.noise_floor * ref.total_power();
    if (!(ref.total_power() > 0.0)) {
        throw InsufficientDataError("estimate_blur: reference spectrum is empty (constant image)");
    }

    struct Sample {
        double x;  // rho^2
        double y;  // ln ratio
        double w;
    };
    std::vector<Sample> samples;
    bool any_above_floor = false;
    for (std::size_t i = 0; i < ref.bins.size() && i < deg.bins.size(); ++i) {
        const SpectrumBin& r = ref.bins[i];
        if (r.rho < options.rho_min || r.rho > options.rho_max) {
            continue;
        }
        if (!(r.power > floor)) {
            continue;
        }
        any_above_floor = true;
        const double ratio = deg.bins[i].power / r.power;
        if (!(ratio > options.min_ratio)) {
            continue;
        }
        samples.push_back({r.rho * r.rho, std::log(ratio), r.power});
    }
    if (!any_above_floor) {
        throw InsufficientDataError("estimate_blur: reference spectrum below noise floor in band");
    }
    if (samples.size() < 4) {
        throw InsufficientDataError("estimate_blur: fewer than 4 usable spectral bins");
    }

    double sxy = 0.0;
    double sxx = 0.0;
    double sw = 0.0;
    double swy = 0.0;
    for (const auto& s : samples) {
        sxy += s.w * s.x * s.y;
        sxx += s.w * s.x * s.x;
        sw += s.w;
        swy += s.w * s.y;
    }
    const double slope = std::min(0.0, sxy / sxx);

    const double y_mean = swy / sw;
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (const auto& s : samples) {
        const double e = s.y - slope * s.x;
        ss_res += s.w * e * e;
        ss_tot += s.w * (s.y - y_mean) * (s.y - y_mean);
    }
    double r2 = 1.0;
    if (ss_tot > 0.0) {
        r2 = 1.0 - ss_res / ss_tot;
    } else if (ss_res > 0.0) {
        r2 = 0.0;
    }

    BlurEstimate est;
    est.sigma_px = std::sqrt(std::max(0.0, -slope) / (4.0 * std::numbers::pi * std::numbers::pi));
    est.xi = est.sigma_px / options.s_g_px;
    est.fit_r2 = std::clamp(r2, 0.0, 1.0);
    est.bins_used = static_cast<int>(samples.size());
    return est;
}

}  // namespace liqa
