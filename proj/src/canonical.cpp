#include "liqa/canonical.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace liqa {

double nominal_vd(double display_height_mm, int rows)
{
    if (!(display_height_mm > 0.0) || !std::isfinite(display_height_mm) || rows <= 0) {
        throw std::invalid_argument("nominal_vd: display height and rows must be positive");
    }
    return kArcminViewingConstant * display_height_mm / rows;
}

ViewingGeometry::ViewingGeometry(double display_height_mm, int rows, double actual_vd_mm,
                                 TauBounds bounds)
    : display_height_mm_(display_height_mm),
      rows_(rows),
      nominal_vd_mm_(nominal_vd(display_height_mm, rows)),
      actual_vd_mm_(actual_vd_mm),
      tau_(actual_vd_mm / nominal_vd_mm_)
{
    if (!(actual_vd_mm > 0.0) || !std::isfinite(actual_vd_mm)) {
        throw std::invalid_argument("ViewingGeometry: viewing distance must be positive");
    }
    if (!(tau_ > bounds.lower && tau_ < bounds.upper)) {
        throw std::invalid_argument("ViewingGeometry: normalized viewing distance " +
                                    std::to_string(tau_) + " outside sanity bounds");
    }
}

NormalizedBlur::NormalizedBlur(double xi) : xi_(xi)
{
    if (!(xi >= 0.0) || !std::isfinite(xi)) {
        throw std::invalid_argument("NormalizedBlur: xi must be finite and >= 0");
    }
}

NormalizedBlur NormalizedBlur::from_sigma_px(double sigma_px, double s_g_px)
{
    if (!(s_g_px > 0.0)) {
        throw std::invalid_argument("NormalizedBlur: neural spread must be positive");
    }
    return NormalizedBlur(sigma_px / s_g_px);
}

void CanonicalParams::validate() const
{
    if (!(q > 0.0 && q <= 3.0)) {
        throw std::invalid_argument("CanonicalParams: scoring gain must lie in (0, 3]");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("CanonicalParams: tau must be positive");
    }
    if (!(s_g_arcmin > 0.0) || !std::isfinite(s_g_arcmin)) {
        throw std::invalid_argument("CanonicalParams: neural spread must be positive");
    }
}

double vntf_magnitude(double rho, double s_g_arcmin)
{
    if (!(rho >= 0.0)) {
        throw std::invalid_argument("vntf_magnitude: rho must be >= 0");
    }
    return 2.0 * std::numbers::pi * rho * std::exp(-s_g_arcmin * s_g_arcmin * rho * rho);
}

double vntf_peak_frequency(double s_g_arcmin)
{
    return 1.0 / (s_g_arcmin * std::numbers::sqrt2);
}

double expected_pfi_ratio(NormalizedBlur xi) noexcept
{
    const double x = xi.value();
    return 1.0 / (1.0 + x * x);
}

double quality_loss_index(NormalizedBlur xi) noexcept
{
    return 1.0 - std::sqrt(expected_pfi_ratio(xi));
}

double canonical_dmos(const CanonicalParams& params, NormalizedBlur xi)
{
    params.validate();
    const double tau2 = params.tau * params.tau;
    const double scaled = xi.value() / tau2;
    return 100.0 * params.q * (1.0 - 1.0 / std::sqrt(1.0 + scaled * scaled));
}

double scoring_gain_from_anchor(double d_a, NormalizedBlur xi_a)
{
    if (!(d_a > 0.0 && d_a <= 100.0)) {
        throw std::invalid_argument("scoring_gain_from_anchor: anchor DMOS must lie in (0, 100]");
    }
    const double loss = quality_loss_index(xi_a);
    if (!(loss > 0.0)) {
        throw std::invalid_argument("scoring_gain_from_anchor: anchor blur must be positive");
    }
    return (d_a / 100.0) / loss;
}

std::optional<double> blur_increment_for_dmos_step(const CanonicalParams& params, NormalizedBlur xi,
                                                   double delta_dmos)
{
    if (!(delta_dmos > 0.0)) {
        throw std::invalid_argument("blur_increment_for_dmos_step: step must be positive");
    }
    const double target = (canonical_dmos(params, xi) + delta_dmos) / (100.0 * params.q);
    if (target >= 1.0) {
        return std::nullopt;
    }
    // Invert d = 100 Q (1 - (1 + (xi/tau^2)^2)^(-1/2)).
    const double inv = 1.0 / (1.0 - target);
    const double xi_next = params.tau * params.tau * std::sqrt(inv * inv - 1.0);
    return xi_next - xi.value();
}

}  // namespace liqa
