#pragma once

#include <span>
#include <vector>

namespace liqa {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
/// family; interior tangents are the weighted harmonic mean of adjacent
/// secants, zero at local extrema, with limited three-point end slopes).
/// Monotone data yield a monotone interpolant that passes through every knot.
/// Tangents are a pure function of the knots.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    /// Requires x strictly increasing and equal lengths >= 1; throws
    /// std::invalid_argument otherwise.
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    /// Evaluates inside [x.front(), x.back()]; outside it the end value is held.
    double operator()(double t) const noexcept;

    /// First derivative (0 outside the knot span).
    double derivative(double t) const noexcept;

    std::span<const double> knots_x() const noexcept { return x_; }
    std::span<const double> knots_y() const noexcept { return y_; }
    std::span<const double> tangents() const noexcept { return d_; }
    std::size_t size() const noexcept { return x_.size(); }

private:
    std::size_t segment(double t) const noexcept;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> d_;
};

}  // namespace liqa
