#pragma once

#include <optional>

namespace liqa {

/// Millimetres of viewing distance per (display height / rows) at which one
/// pixel subtends one arcminute: 1 / tan(1 arcmin), rounded.
inline constexpr double kArcminViewingConstant = 3438.0;

/// Default spread of the neural receptive field, arcmin. At the nominal
/// viewing distance one display pixel subtends one arcmin, so this is also
/// the spread in display pixels.
inline constexpr double kDefaultNeuralSpreadArcmin = 2.5;

/// Nominal viewing distance 3438 * H / L in mm: the distance at which the
/// pixel pitch matches the 60 receptors/degree retinal sampling.
/// Throws std::invalid_argument on non-positive input.
double nominal_vd(double display_height_mm, int rows);

/// Open interval of accepted normalized viewing distances.
struct TauBounds {
    double lower = 0.1;
    double upper = 4.0;
};

/// Display geometry with the normalized viewing distance tau = actual / nominal.
class ViewingGeometry {
public:
    /// Throws std::invalid_argument on non-positive input or when tau falls
    /// outside the open interval given by `bounds`.
    ViewingGeometry(double display_height_mm, int rows, double actual_vd_mm,
                    TauBounds bounds = {});

    double display_height_mm() const noexcept { return display_height_mm_; }
    int rows() const noexcept { return rows_; }
    double nominal_vd_mm() const noexcept { return nominal_vd_mm_; }
    double actual_vd_mm() const noexcept { return actual_vd_mm_; }
    double tau() const noexcept { return tau_; }

private:
    double display_height_mm_;
    int rows_;
    double nominal_vd_mm_;
    double actual_vd_mm_;
    double tau_;
};

/// Normalized blur xi = s_B / s_G (blur spread over neural spread).
class NormalizedBlur {
public:
    /// Throws std::invalid_argument unless xi is finite and >= 0.
    explicit NormalizedBlur(double xi);

    /// xi for a Gaussian blur of standard deviation `sigma_px` display pixels,
    /// with the neural spread expressed in pixels at nominal viewing distance.
    static NormalizedBlur from_sigma_px(double sigma_px,
                                        double s_g_px = kDefaultNeuralSpreadArcmin);

    double value() const noexcept { return xi_; }

private:
    double xi_;
};

/// Scoring gain, normalized viewing distance and neural spread: everything
/// the canonical rating function needs.
struct CanonicalParams {
    double q = 1.0;
    double tau = 1.0;
    double s_g_arcmin = kDefaultNeuralSpreadArcmin;

    /// Throws std::invalid_argument unless q in (0, 3], tau > 0, s_g > 0.
    void validate() const;
};

/// Magnitude of the neural transfer function, 2*pi*rho*exp(-s_g^2*rho^2),
/// with rho in cycles/arcmin.
double vntf_magnitude(double rho, double s_g_arcmin = kDefaultNeuralSpreadArcmin);

/// Radial frequency maximizing vntf_magnitude: 1 / (s_g * sqrt(2)).
double vntf_peak_frequency(double s_g_arcmin = kDefaultNeuralSpreadArcmin);

/// Ratio of expected positional Fisher information with and without blur,
/// s_G^2 / (s_G^2 + s_B^2) = 1 / (1 + xi^2). Noise level and orientation
/// energy cancel in the ratio.
double expected_pfi_ratio(NormalizedBlur xi) noexcept;

/// Relative loss of localization accuracy, 1 - sqrt(1 / (1 + xi^2)).
double quality_loss_index(NormalizedBlur xi) noexcept;

/// Canonical DMOS estimate 100 * Q * (1 - (1 + xi^2 / tau^4)^(-1/2)).
double canonical_dmos(const CanonicalParams& params, NormalizedBlur xi);

/// Scoring gain that makes canonical_dmos(Q, tau = 1, xi_a) equal `d_a`.
/// Throws std::invalid_argument when xi_a is 0 or d_a is outside (0, 100].
double scoring_gain_from_anchor(double d_a, NormalizedBlur xi_a);

/// Smallest blur increment dxi such that the canonical DMOS grows by
/// `delta_dmos` starting from `xi`; a just-noticeable-difference proxy whose
/// minimum over xi sits at sqrt(1/2) * tau^2. Returns nullopt when the
/// increment cannot be reached before saturation.
std::optional<double> blur_increment_for_dmos_step(const CanonicalParams& params, NormalizedBlur xi,
                                                   double delta_dmos);

}  // namespace liqa
