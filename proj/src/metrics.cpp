#include "liqa/metrics.hpp"

#include "liqa/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace liqa {

MetricId metric_id(MetricKind kind) noexcept
{
    switch (kind) {
    case MetricKind::gmsd:
        return {kind, Orientation::lower_is_better};
    case MetricKind::mssim:
    case MetricKind::vifp:
        break;
    }
    return {kind, Orientation::higher_is_better};
}

std::string_view metric_name(MetricKind kind) noexcept
{
    switch (kind) {
    case MetricKind::mssim:
        return "MSSIM";
    case MetricKind::gmsd:
        return "GMSD";
    case MetricKind::vifp:
        return "VIFP";
    }
    return "?";
}

std::string_view orientation_name(Orientation o) noexcept
{
    return o == Orientation::higher_is_better ? "higher_is_better" : "lower_is_better";
}

namespace {

std::string upper(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

}  // namespace

MetricKind parse_metric(std::string_view name)
{
    const std::string u = upper(name);
    for (MetricKind k : kAllMetrics) {
        if (u == metric_name(k)) {
            return k;
        }
    }
    if (u == "MS-SSIM" || u == "MSSSIM") {
        return MetricKind::mssim;
    }
    if (u == "VIF") {
        return MetricKind::vifp;
    }
    throw std::invalid_argument("unknown metric: " + std::string(name));
}

Orientation parse_orientation(std::string_view name)
{
    if (name == "higher_is_better") {
        return Orientation::higher_is_better;
    }
    if (name == "lower_is_better") {
        return Orientation::lower_is_better;
    }
    throw std::invalid_argument("unknown orientation: " + std::string(name));
}

double perfect_value(MetricKind kind) noexcept
{
    return kind == MetricKind::gmsd ? 0.0 : 1.0;
}

double oriented_value(MetricId id, double zeta) noexcept
{
    return id.orientation == Orientation::higher_is_better ? -zeta : zeta;
}

double oriented_value(const MetricScore& score) noexcept
{
    return oriented_value(score.id, score.value);
}

namespace {

// Dense working plane for the metric pipelines.
struct Plane {
    int w = 0;
    int h = 0;
    std::vector<double> v;

    Plane() = default;
    Plane(int width, int height) : w(width), h(height), v(static_cast<std::size_t>(width) * height) {}
    explicit Plane(const LumaImage& img)
        : w(img.width()), h(img.height()), v(img.samples().begin(), img.samples().end())
    {
    }

    double& at(int x, int y) { return v[static_cast<std::size_t>(y) * w + x]; }
    double at(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
};

Plane multiply(const Plane& a, const Plane& b)
{
    Plane out(a.w, a.h);
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        out.v[i] = a.v[i] * b.v[i];
    }
    return out;
}

// Correlation with a separable kernel, keeping only fully supported outputs.
Plane filter_valid(const Plane& in, const std::vector<double>& k)
{
    const int n = static_cast<int>(k.size());
    const int ow = in.w - n + 1;
    const int oh = in.h - n + 1;
    Plane tmp(ow, in.h);
    for (int y = 0; y < in.h; ++y) {
        const double* row = &in.v[static_cast<std::size_t>(y) * in.w];
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += k[static_cast<std::size_t>(i)] * row[x + i];
            }
            tmp.at(x, y) = acc;
        }
    }
    Plane out(ow, oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += k[static_cast<std::size_t>(i)] * tmp.at(x, y + i);
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

// 1-D factor of a normalized 2-D Gaussian window of odd size `n`.
std::vector<double> gaussian_window(int n, double sigma)
{
    std::vector<double> k(static_cast<std::size_t>(n));
    const double c = (n - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        k[static_cast<std::size_t>(i)] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
        sum += k[static_cast<std::size_t>(i)];
    }
    for (double& v : k) {
        v /= sum;
    }
    return k;
}

// 2x2 mean then decimation; an odd trailing row/column is mirrored.
Plane halve_mean(const Plane& in)
{
    const int ow = (in.w + 1) / 2;
    const int oh = (in.h + 1) / 2;
    Plane out(ow, oh);
    for (int y = 0; y < oh; ++y) {
        const int y0 = 2 * y;
        const int y1 = std::min(y0 + 1, in.h - 1);
        for (int x = 0; x < ow; ++x) {
            const int x0 = 2 * x;
            const int x1 = std::min(x0 + 1, in.w - 1);
            out.at(x, y) = 0.25 * (in.at(x0, y0) + in.at(x1, y0) + in.at(x0, y1) + in.at(x1, y1));
        }
    }
    return out;
}

Plane decimate(const Plane& in)
{
    Plane out((in.w + 1) / 2, (in.h + 1) / 2);
    for (int y = 0; y < out.h; ++y) {
        for (int x = 0; x < out.w; ++x) {
            out.at(x, y) = in.at(2 * x, 2 * y);
        }
    }
    return out;
}

double mean_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

void require_pair(const LumaImage& reference, const LumaImage& degraded, int min_side, const char* name)
{
    if (reference.width() != degraded.width() || reference.height() != degraded.height()) {
        throw std::invalid_argument(std::string(name) + ": image dimensions differ");
    }
    if (std::min(reference.width(), reference.height()) < min_side) {
        throw std::invalid_argument(std::string(name) + ": smaller image side must be >= " +
                                    std::to_string(min_side));
    }
}

struct SsimTerms {
    double ssim = 0.0;
    double cs = 0.0;
    long pixels = 0;
};

SsimTerms ssim_terms(const Plane& a, const Plane& b, const std::vector<double>& window)
{
    constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
    constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

    const Plane mu1 = filter_valid(a, window);
    const Plane mu2 = filter_valid(b, window);
    const Plane e11 = filter_valid(multiply(a, a), window);
    const Plane e22 = filter_valid(multiply(b, b), window);
    const Plane e12 = filter_valid(multiply(a, b), window);

    double ssim_sum = 0.0;
    double cs_sum = 0.0;
    for (std::size_t i = 0; i < mu1.v.size(); ++i) {
        const double m1 = mu1.v[i];
        const double m2 = mu2.v[i];
        const double s11 = e11.v[i] - m1 * m1;
        const double s22 = e22.v[i] - m2 * m2;
        const double s12 = e12.v[i] - m1 * m2;
        const double cs = (2.0 * s12 + kC2) / (s11 + s22 + kC2);
        const double lum = (2.0 * m1 * m2 + kC1) / (m1 * m1 + m2 * m2 + kC1);
        cs_sum += cs;
        ssim_sum += lum * cs;
    }
    const auto n = static_cast<double>(mu1.v.size());
    return {ssim_sum / n, cs_sum / n, static_cast<long>(mu1.v.size())};
}

}  // namespace

MetricScore mssim(const LumaImage& reference, const LumaImage& degraded)
{
    require_pair(reference, degraded, 176, "mssim");
    static constexpr std::array<double, 5> kWeights{0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
    const auto window = gaussian_window(11, 1.5);

    Plane a(reference);
    Plane b(degraded);
    double product = 1.0;
    long region = 0;
    for (std::size_t level = 0; level < kWeights.size(); ++level) {
        const SsimTerms t = ssim_terms(a, b, window);
        if (level == 0) {
            region = t.pixels;
        }
        const double term = level + 1 < kWeights.size() ? t.cs : t.ssim;
        product *= std::pow(std::max(term, 0.0), kWeights[level]);
        if (level + 1 < kWeights.size()) {
            a = halve_mean(a);
            b = halve_mean(b);
        }
    }
    return {metric_id(MetricKind::mssim), product, region};
}

MetricScore gmsd(const LumaImage& reference, const LumaImage& degraded)
{
    require_pair(reference, degraded, 32, "gmsd");
    constexpr double kT = 170.0;

    auto gradient_magnitude = [](const LumaImage& img) {
        // 2x2 block mean, decimated, over the even-sized region.
        const int w = img.width() / 2;
        const int h = img.height() / 2;
        Plane d(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                d.at(x, y) = 0.25 * (img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) +
                                     img.at(2 * x, 2 * y + 1) + img.at(2 * x + 1, 2 * y + 1));
            }
        }
        // Prewitt, valid region only.
        Plane m(w - 2, h - 2);
        for (int y = 1; y < h - 1; ++y) {
            for (int x = 1; x < w - 1; ++x) {
                double gx = 0.0;
                double gy = 0.0;
                for (int k = -1; k <= 1; ++k) {
                    gx += d.at(x - 1, y + k) - d.at(x + 1, y + k);
                    gy += d.at(x + k, y - 1) - d.at(x + k, y + 1);
                }
                gx /= 3.0;
                gy /= 3.0;
                m.at(x - 1, y - 1) = std::sqrt(gx * gx + gy * gy);
            }
        }
        return m;
    };

    const Plane mr = gradient_magnitude(reference);
    const Plane md = gradient_magnitude(degraded);
    std::vector<double> map(mr.v.size());
    for (std::size_t i = 0; i < map.size(); ++i) {
        map[i] = (2.0 * mr.v[i] * md.v[i] + kT) / (mr.v[i] * mr.v[i] + md.v[i] * md.v[i] + kT);
    }
    const double mu = mean_of(map);
    double ss = 0.0;
    for (double v : map) {
        ss += (v - mu) * (v - mu);
    }
    const double sd = std::sqrt(ss / static_cast<double>(map.size() - 1));
    return {metric_id(MetricKind::gmsd), sd, static_cast<long>(map.size())};
}

MetricScore vifp(const LumaImage& reference, const LumaImage& degraded)
{
    require_pair(reference, degraded, 128, "vifp");
    constexpr double kSigmaNsq = 2.0;
    constexpr double kEps = 1e-10;

    Plane ref(reference);
    Plane dist(degraded);
    double num = 0.0;
    double den = 0.0;
    long region = 0;
    for (int scale = 1; scale <= 4; ++scale) {
        const int n = (1 << (4 - scale + 1)) + 1;
        const auto win = gaussian_window(n, n / 5.0);
        if (scale > 1) {
            ref = decimate(filter_valid(ref, win));
            dist = decimate(filter_valid(dist, win));
        }
        const Plane mu1 = filter_valid(ref, win);
        const Plane mu2 = filter_valid(dist, win);
        const Plane e11 = filter_valid(multiply(ref, ref), win);
        const Plane e22 = filter_valid(multiply(dist, dist), win);
        const Plane e12 = filter_valid(multiply(ref, dist), win);
        if (scale == 1) {
            region = static_cast<long>(mu1.v.size());
        }
        for (std::size_t i = 0; i < mu1.v.size(); ++i) {
            double s11 = std::max(0.0, e11.v[i] - mu1.v[i] * mu1.v[i]);
            double s22 = std::max(0.0, e22.v[i] - mu2.v[i] * mu2.v[i]);
            const double s12 = e12.v[i] - mu1.v[i] * mu2.v[i];

            double g = s12 / (s11 + kEps);
            double sv = s22 - g * s12;
            if (s11 < kEps) {
                g = 0.0;
                sv = s22;
                s11 = 0.0;
            }
            if (s22 < kEps) {
                g = 0.0;
                sv = 0.0;
            }
            if (g < 0.0) {
                sv = s22;
                g = 0.0;
            }
            sv = std::max(sv, kEps);
            num += std::log10(1.0 + g * g * s11 / (sv + kSigmaNsq));
            den += std::log10(1.0 + s11 / kSigmaNsq);
        }
    }
    if (!(den > 0.0)) {
        throw InsufficientDataError("vifp: reference image carries no signal variance");
    }
    return {metric_id(MetricKind::vifp), num / den, region};
}

MetricScore compute_metric(MetricKind kind, const LumaImage& reference, const LumaImage& degraded)
{
    switch (kind) {
    case MetricKind::mssim:
        return mssim(reference, degraded);
    case MetricKind::gmsd:
        return gmsd(reference, degraded);
    case MetricKind::vifp:
        return vifp(reference, degraded);
    }
    throw std::invalid_argument("compute_metric: unknown metric");
}

}  // namespace liqa
