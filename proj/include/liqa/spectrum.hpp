#pragma once

#include "liqa/image.hpp"

#include <vector>

namespace liqa {

struct SpectrumBin {
    double rho = 0.0;    ///< mean radial frequency of the bin's DFT samples, cycles/pixel
    double power = 0.0;  ///< mean power over the bin
};

/// Annular averages of the 2D power spectrum. Bins are ordered by strictly
/// increasing rho in (0, 0.5]; bins that contain no DFT sample are omitted.
struct RadialSpectrum {
    std::vector<SpectrumBin> bins;
    double dc_power = 0.0;

    double total_power() const noexcept;
};

/// Power spectrum of the mean-removed, 2D-Hann-windowed image, averaged over
/// `n_bins` annuli uniform in rho over (0, 0.5]. Radial frequency is
/// sqrt(f1^2 + f2^2) from per-axis DFT frequencies, so non-square images bin
/// correctly. Requires at least 32x32 and n_bins >= 8.
RadialSpectrum radial_power_spectrum(const LumaImage& image, int n_bins);

}  // namespace liqa
