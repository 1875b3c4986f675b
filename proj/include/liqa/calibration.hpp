#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace liqa {

/// Five-parameter VQEG scoring curve
///   m(z) = b1 * (1/2 - 1 / (1 + exp(b2 * (z - b3)))) + b4 * z + b5.
struct LogisticParams {
    std::array<double, 5> beta{0.0, 1.0, 0.0, 0.0, 0.0};

    /// Throws std::invalid_argument for non-finite values or b2 == 0.
    void validate() const;
};

/// The exponent is clamped to +-700 so extreme arguments saturate.
double logistic_eval(const LogisticParams& p, double zeta) noexcept;

struct FitStats {
    double rmse = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Cost (sum of squared residuals) after every accepted step of the
    /// winning start, beginning with the initial cost.
    std::vector<double> cost_history;
};

struct LogisticFit : FitStats {
    LogisticParams params;
};

struct CanonicalFit : FitStats {
    double q = 1.0;
    double tau = 1.0;
    /// Set when the blur span is too narrow (< one decade) to separate Q and tau.
    bool unidentifiable = false;
};

struct FitOptions {
    int max_iterations = 500;
    double relative_tolerance = 1e-8;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) least-squares fit of the
/// logistic curve to (zeta, dmos) pairs. Without `init` the search starts
/// from a data-driven guess, three perturbations of it, and the plain
/// linear regression; the lowest cost wins.
/// Throws std::invalid_argument for fewer than 10 pairs or constant zeta.
LogisticFit fit_logistic(std::span<const std::pair<double, double>> pairs,
                         std::optional<LogisticParams> init = std::nullopt, const FitOptions& options = {});

/// Least-squares (Q, tau) of the canonical rating function to (xi, dmos)
/// pairs with Q in (0, 3] and tau in [0.2, 2]: 16x16 grid seed, then damped
/// Gauss-Newton with projection onto the box.
/// Throws std::invalid_argument when fewer than 8 pairs have xi > 0.
CanonicalFit fit_canonical(std::span<const std::pair<double, double>> blur_pairs,
                           const FitOptions& options = {});

/// {"model", "params", "rmse", "converged", ...} documents.
std::string to_json(const LogisticFit& fit);
std::string to_json(const CanonicalFit& fit);

}  // namespace liqa
