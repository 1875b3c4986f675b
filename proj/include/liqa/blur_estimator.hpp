#pragma once

#include "liqa/canonical.hpp"
#include "liqa/image.hpp"

namespace liqa {

struct BlurEstimatorOptions {
    double rho_min = 0.02;  ///< cycles/pixel
    double rho_max = 0.25;  ///< cycles/pixel
    int n_bins = 64;
    /// Bins whose reference power is below this fraction of the total AC
    /// power are treated as spectral nulls.
    double noise_floor = 1e-6;
    /// Bins whose power ratio fell below this level are beyond the dynamic
    /// range of the measurement (window leakage, quantization) and are dropped.
    double min_ratio = 1e-3;
    double s_g_px = kDefaultNeuralSpreadArcmin;
};

struct BlurEstimate {
    double sigma_px = 0.0;
    double xi = 0.0;      ///< sigma_px / s_g_px
    double fit_r2 = 0.0;  ///< weighted goodness of the log-ratio fit, [0, 1]
    int bins_used = 0;
};

/// Gaussian blur spread of `degraded` relative to `reference` by spectral
/// division. The radial power ratio r(rho) = P_deg / P_ref is fitted as
/// ln r = -4 pi^2 sigma^2 rho^2 by weighted least squares through the origin
/// (weights = reference bin power). Growing ratios clamp to sigma = 0.
///
/// Throws std::invalid_argument for mismatched or sub-64x64 images or a bad
/// band, and InsufficientDataError when fewer than 4 bins survive.
BlurEstimate estimate_blur(const LumaImage& reference, const LumaImage& degraded,
                           const BlurEstimatorOptions& options = {});

}  // namespace liqa
