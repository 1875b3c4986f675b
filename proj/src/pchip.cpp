#include "liqa/pchip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace liqa {

namespace {

bool same_sign(double a, double b)
{
    return (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0);
}

// Three-point end slope, limited so the end segment stays shape preserving.
double end_slope(double h0, double h1, double del0, double del1)
{
    double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if (!same_sign(d, del0)) {
        d = 0.0;
    } else if (!same_sign(del0, del1) && std::abs(d) > std::abs(3.0 * del0)) {
        d = 3.0 * del0;
    }
    return d;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y))
{
    if (x_.empty() || x_.size() != y_.size()) {
        throw std::invalid_argument("MonotoneCubic: need equal, non-empty knot vectors");
    }
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
            throw std::invalid_argument("MonotoneCubic: non-finite knot");
        }
        if (i > 0 && !(x_[i] > x_[i - 1])) {
            throw std::invalid_argument("MonotoneCubic: abscissae must be strictly increasing");
        }
    }

    const std::size_t n = x_.size();
    d_.assign(n, 0.0);
    if (n == 1) {
        return;
    }
    std::vector<double> h(n - 1);
    std::vector<double> del(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x_[k + 1] - x_[k];
        del[k] = (y_[k + 1] - y_[k]) / h[k];
    }
    if (n == 2) {
        d_[0] = d_[1] = del[0];
        return;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (same_sign(del[k - 1], del[k])) {
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            d_[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
    }
    d_[0] = end_slope(h[0], h[1], del[0], del[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
}

std::size_t MonotoneCubic::segment(double t) const noexcept
{
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - x_.begin());
    k = k == 0 ? 0 : k - 1;
    return std::min(k, x_.size() - 2);
}

double MonotoneCubic::operator()(double t) const noexcept
{
    if (x_.size() == 1 || t <= x_.front()) {
        return y_.front();
    }
    if (t >= x_.back()) {
        return y_.back();
    }
    const std::size_t k = segment(t);
    const double h = x_[k + 1] - x_[k];
    const double s = (t - x_[k]) / h;
    const double delta = (y_[k + 1] - y_[k]) / h;
    const double c2 = 3.0 * delta - 2.0 * d_[k] - d_[k + 1];
    const double c3 = d_[k] + d_[k + 1] - 2.0 * delta;
    // Increment form keeps flat segments exact; each segment of a
    // shape-preserving interpolant stays within its end values, so the clamp
    // only removes rounding.
    const double v = y_[k] + h * s * (d_[k] + s * (c2 + s * c3));
    return std::clamp(v, std::min(y_[k], y_[k + 1]), std::max(y_[k], y_[k + 1]));
}

double MonotoneCubic::derivative(double t) const noexcept
{
    if (x_.size() == 1 || t < x_.front() || t > x_.back()) {
        return 0.0;
    }
    const std::size_t k = segment(t);
    const double h = x_[k + 1] - x_[k];
    const double s = (t - x_[k]) / h;
    const double s2 = s * s;
    const double dh00 = (6.0 * s2 - 6.0 * s) / h;
    const double dh10 = 3.0 * s2 - 4.0 * s + 1.0;
    const double dh01 = (-6.0 * s2 + 6.0 * s) / h;
    const double dh11 = 3.0 * s2 - 2.0 * s;
    return dh00 * y_[k] + dh10 * d_[k] + dh01 * y_[k + 1] + dh11 * d_[k + 1];
}

}  // namespace liqa
