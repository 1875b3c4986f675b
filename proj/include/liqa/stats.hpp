#pragma once

#include <span>
#include <vector>

namespace liqa {

/// Sample Pearson correlation. Requires equal lengths >= 3 and nonzero
/// variance in both arguments (std::invalid_argument otherwise).
double pearson(std::span<const double> x, std::span<const double> y);

/// 1-based fractional ranks; ties share the mean of their positions.
std::vector<double> midranks(std::span<const double> v);

/// Pearson correlation of midranks. Requires equal lengths >= 3 and
/// neither vector constant.
double spearman(std::span<const double> x, std::span<const double> y);

/// Root mean squared difference; requires equal, non-empty inputs.
double rmse(std::span<const double> predicted, std::span<const double> actual);

}  // namespace liqa
