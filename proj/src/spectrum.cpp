#include "liqa/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace liqa {

double RadialSpectrum::total_power() const noexcept
{
    double sum = 0.0;
    for (const auto& b : bins) {
        sum += b.power;
    }
    return sum;
}

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

std::vector<double> hann(int n)
{
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 0.5) / n);
    }
    return w;
}

double dft_frequency(int k, int n)
{
    return (k <= n / 2 ? k : k - n) / static_cast<double>(n);
}

}  // namespace

RadialSpectrum radial_power_spectrum(const LumaImage& image, int n_bins)
{
    if (image.width() < 32 || image.height() < 32) {
        throw std::invalid_argument("radial_power_spectrum: image must be at least 32x32");
    }
    if (n_bins < 8) {
        throw std::invalid_argument("radial_power_spectrum: n_bins must be >= 8");
    }
    const int w = image.width();
    const int h = image.height();
    const int wc = w / 2 + 1;

    std::unique_ptr<double, FftwFree> in(fftw_alloc_real(static_cast<std::size_t>(w) * h));
    std::unique_ptr<fftw_complex, FftwFree> out(
        reinterpret_cast<fftw_complex*>(fftw_alloc_complex(static_cast<std::size_t>(wc) * h)));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_2d(h, w, in.get(), out.get(), FFTW_ESTIMATE);
    }

    const double mean = image.mean();
    const auto wx = hann(w);
    const auto wy = hann(h);
    for (int y = 0; y < h; ++y) {
        const auto row = image.row(y);
        for (int x = 0; x < w; ++x) {
            in.get()[static_cast<std::size_t>(y) * w + x] =
                (row[static_cast<std::size_t>(x)] - mean) * wx[static_cast<std::size_t>(x)] *
                wy[static_cast<std::size_t>(y)];
        }
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    std::vector<double> power_sum(static_cast<std::size_t>(n_bins), 0.0);
    std::vector<double> rho_sum(static_cast<std::size_t>(n_bins), 0.0);
    std::vector<double> count(static_cast<std::size_t>(n_bins), 0.0);
    RadialSpectrum spectrum;

    for (int ky = 0; ky < h; ++ky) {
        const double fy = dft_frequency(ky, h);
        for (int kx = 0; kx < wc; ++kx) {
            const double fx = kx / static_cast<double>(w);
            const fftw_complex& c = out.get()[static_cast<std::size_t>(ky) * wc + kx];
            const double p = c[0] * c[0] + c[1] * c[1];
            if (kx == 0 && ky == 0) {
                spectrum.dc_power = p;
                continue;
            }
            const double rho = std::hypot(fx, fy);
            if (rho > 0.5) {
                continue;
            }
            // Columns strictly inside (0, w/2) stand for their conjugate twins too.
            const bool self_conjugate = kx == 0 || (w % 2 == 0 && kx == w / 2);
            const double mult = self_conjugate ? 1.0 : 2.0;
            int bin = static_cast<int>(std::ceil(rho / 0.5 * n_bins)) - 1;
            bin = std::clamp(bin, 0, n_bins - 1);
            power_sum[static_cast<std::size_t>(bin)] += mult * p;
            rho_sum[static_cast<std::size_t>(bin)] += mult * rho;
            count[static_cast<std::size_t>(bin)] += mult;
        }
    }

    for (int b = 0; b < n_bins; ++b) {
        const auto i = static_cast<std::size_t>(b);
        if (count[i] > 0.0) {
            spectrum.bins.push_back({rho_sum[i] / count[i], power_sum[i] / count[i]});
        }
    }
    return spectrum;
}

}  // namespace liqa
