#include "liqa/filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace liqa {

int reflect_index(int i, int n) noexcept
{
    if (n == 1) {
        return 0;
    }
    const int period = 2 * n;
    int m = i % period;
    if (m < 0) {
        m += period;
    }
    return m < n ? m : period - 1 - m;
}

std::vector<double> gaussian_kernel(double sigma)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("gaussian_kernel: sigma must be finite and >= 0");
    }
    if (sigma == 0.0) {
        return {1.0};
    }
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> taps(2 * static_cast<std::size_t>(radius) + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double v = std::exp(-0.5 * k * k / (sigma * sigma));
        taps[static_cast<std::size_t>(k + radius)] = v;
        sum += v;
    }
    for (double& t : taps) {
        t /= sum;
    }
    return taps;
}

namespace {

// One horizontal pass of a symmetric odd-length kernel, then transpose in the
// output so the same routine serves both axes.
std::vector<double> convolve_rows_transposed(const std::vector<double>& src, int width, int height,
                                             const std::vector<double>& taps)
{
    const int radius = static_cast<int>(taps.size() / 2);
    std::vector<double> out(src.size());
    std::vector<double> padded(static_cast<std::size_t>(width + 2 * radius));
    for (int y = 0; y < height; ++y) {
        const double* row = &src[static_cast<std::size_t>(y) * width];
        for (int i = -radius; i < width + radius; ++i) {
            padded[static_cast<std::size_t>(i + radius)] = row[reflect_index(i, width)];
        }
        for (int x = 0; x < width; ++x) {
            const double* p = &padded[static_cast<std::size_t>(x)];
            double acc = 0.0;
            for (std::size_t k = 0; k < taps.size(); ++k) {
                acc += taps[k] * p[k];
            }
            out[static_cast<std::size_t>(x) * height + y] = acc;
        }
    }
    return out;
}

}  // namespace

LumaImage gaussian_blur(const LumaImage& image, double sigma)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("gaussian_blur: sigma must be finite and >= 0");
    }
    if (sigma == 0.0) {
        return image;
    }
    const auto taps = gaussian_kernel(sigma);
    const std::vector<double> src(image.samples().begin(), image.samples().end());
    auto pass1 = convolve_rows_transposed(src, image.width(), image.height(), taps);
    auto pass2 = convolve_rows_transposed(pass1, image.height(), image.width(), taps);
    return LumaImage(image.width(), image.height(), std::move(pass2));
}

namespace {

double catmull_rom(double t)
{
    t = std::abs(t);
    if (t < 1.0) {
        return (1.5 * t - 2.5) * t * t + 1.0;
    }
    if (t < 2.0) {
        return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
    }
    return 0.0;
}

struct Contribution {
    int first = 0;
    std::vector<double> weights;
};

// Per output sample: the source taps and normalized weights along one axis.
std::vector<Contribution> axis_contributions(int out_size, double factor)
{
    const double scale = std::min(1.0, factor);
    const double support = 2.0 / scale;
    std::vector<Contribution> table(static_cast<std::size_t>(out_size));
    for (int o = 0; o < out_size; ++o) {
        const double center = (o + 0.5) / factor - 0.5;
        const int first = static_cast<int>(std::floor(center - support)) + 1;
        const int last = static_cast<int>(std::ceil(center + support)) - 1;
        Contribution c;
        c.first = first;
        double sum = 0.0;
        for (int i = first; i <= last; ++i) {
            const double w = catmull_rom((center - i) * scale);
            c.weights.push_back(w);
            sum += w;
        }
        for (double& w : c.weights) {
            w /= sum;
        }
        table[static_cast<std::size_t>(o)] = std::move(c);
    }
    return table;
}

std::vector<double> resample_rows_transposed(const std::vector<double>& src, int width, int height,
                                             int out_width, const std::vector<Contribution>& contrib)
{
    std::vector<double> out(static_cast<std::size_t>(out_width) * height);
    for (int y = 0; y < height; ++y) {
        const double* row = &src[static_cast<std::size_t>(y) * width];
        for (int o = 0; o < out_width; ++o) {
            const Contribution& c = contrib[static_cast<std::size_t>(o)];
            double acc = 0.0;
            for (std::size_t k = 0; k < c.weights.size(); ++k) {
                acc += c.weights[k] * row[reflect_index(c.first + static_cast<int>(k), width)];
            }
            out[static_cast<std::size_t>(o) * height + y] = acc;
        }
    }
    return out;
}

}  // namespace

LumaImage resample(const LumaImage& image, double factor, ResampleKernel kernel)
{
    if (kernel != ResampleKernel::bicubic) {
        throw std::invalid_argument("resample: unsupported kernel");
    }
    if (!(factor >= 0.1 && factor <= 10.0)) {
        throw std::invalid_argument("resample: factor must lie in [0.1, 10]");
    }
    const int out_w = static_cast<int>(std::lround(image.width() * factor));
    const int out_h = static_cast<int>(std::lround(image.height() * factor));
    if (out_w < 16 || out_h < 16) {
        throw std::invalid_argument("resample: output would be smaller than 16x16");
    }
    if (factor == 1.0) {
        return image;
    }
    const std::vector<double> src(image.samples().begin(), image.samples().end());
    const auto cx = axis_contributions(out_w, factor);
    const auto cy = axis_contributions(out_h, factor);
    auto pass1 = resample_rows_transposed(src, image.width(), image.height(), out_w, cx);
    auto pass2 = resample_rows_transposed(pass1, image.height(), out_w, out_h, cy);
    return LumaImage(out_w, out_h, std::move(pass2));
}

}  // namespace liqa
