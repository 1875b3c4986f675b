#include "liqa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace liqa {

namespace {

void require_same_length(std::span<const double> x, std::span<const double> y, std::size_t min_len,
                         const char* name)
{
    if (x.size() != y.size()) {
        throw std::invalid_argument(std::string(name) + ": length mismatch");
    }
    if (x.size() < min_len) {
        throw std::invalid_argument(std::string(name) + ": need at least " + std::to_string(min_len) +
                                    " samples");
    }
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y)
{
    require_same_length(x, y, 3, "pearson");
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        throw std::invalid_argument("pearson: zero variance");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> midranks(std::span<const double> v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && v[order[j]] == v[order[i]]) {
            ++j;
        }
        // Positions i..j-1 (0-based) share rank mean((i+1)..j).
        const double rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y)
{
    require_same_length(x, y, 3, "spearman");
    const auto rx = midranks(x);
    const auto ry = midranks(y);
    try {
        return pearson(rx, ry);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("spearman: constant input");
    }
}

double rmse(std::span<const double> predicted, std::span<const double> actual)
{
    require_same_length(predicted, actual, 1, "rmse");
    double ss = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - actual[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(predicted.size()));
}

}  // namespace liqa
