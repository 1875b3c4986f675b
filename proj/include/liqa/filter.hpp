#pragma once

#include "liqa/image.hpp"

#include <vector>

namespace liqa {

/// Sampled Gaussian of standard deviation `sigma`, half-width ceil(4*sigma),
/// renormalized to unit sum. sigma = 0 yields the single tap {1}.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with half-sample symmetric boundaries
/// (... c b a | a b c ...). sigma = 0 returns the input unchanged.
/// Throws std::invalid_argument for negative or non-finite sigma.
LumaImage gaussian_blur(const LumaImage& image, double sigma);

enum class ResampleKernel { bicubic };

/// Catmull-Rom resampling to round(width*factor) x round(height*factor),
/// pixel-center aligned. When shrinking, the kernel is widened by 1/factor
/// to suppress aliasing. factor = 1 returns an identical copy.
/// Requires factor in [0.1, 10] and an output of at least 16x16.
LumaImage resample(const LumaImage& image, double factor,
                   ResampleKernel kernel = ResampleKernel::bicubic);

/// Index reflection for half-sample symmetric extension of [0, n).
int reflect_index(int i, int n) noexcept;

}  // namespace liqa
