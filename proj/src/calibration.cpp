#include "liqa/calibration.hpp"

#include "liqa/stats.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace liqa {

void LogisticParams::validate() const
{
    for (double b : beta) {
        if (!std::isfinite(b)) {
            throw std::invalid_argument("LogisticParams: non-finite parameter");
        }
    }
    if (beta[1] == 0.0) {
        throw std::invalid_argument("LogisticParams: beta2 must be nonzero");
    }
}

namespace {

double clamped_exp(double u)
{
    return std::exp(std::clamp(u, -700.0, 700.0));
}

}  // namespace

double logistic_eval(const LogisticParams& p, double zeta) noexcept
{
    const auto& b = p.beta;
    const double s = 1.0 / (1.0 + clamped_exp(b[1] * (zeta - b[2])));
    return b[0] * (0.5 - s) + b[3] * zeta + b[4];
}

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Problem {
    // Fills residuals (model - observed) and the Jacobian at x.
    std::function<void(const Vec& x, Vec& r, Mat* jac)> evaluate;
    std::function<Vec(const Vec&)> project = [](const Vec& x) { return x; };
};

struct LmOutcome {
    Vec x;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

LmOutcome levenberg_marquardt(const Problem& prob, Vec x0, std::size_t n_residuals, const FitOptions& opt)
{
    const Eigen::Index n = x0.size();
    Vec r(static_cast<Eigen::Index>(n_residuals));
    Mat jac(static_cast<Eigen::Index>(n_residuals), n);

    LmOutcome out;
    out.x = prob.project(std::move(x0));
    prob.evaluate(out.x, r, nullptr);
    out.cost = r.squaredNorm();
    out.history.push_back(out.cost);
    double lambda = 1e-3;

    for (int it = 0; it < opt.max_iterations; ++it) {
        out.iterations = it + 1;
        if (!(out.cost > 0.0)) {
            out.converged = true;
            break;
        }
        prob.evaluate(out.x, r, &jac);
        const Mat a = jac.transpose() * jac;
        const Vec g = jac.transpose() * r;
        const double diag_floor = std::max(1e-12, 1e-12 * a.diagonal().maxCoeff());

        bool accepted = false;
        double new_cost = out.cost;
        Vec candidate;
        while (lambda < 1e16) {
            Mat damped = a;
            for (Eigen::Index i = 0; i < n; ++i) {
                damped(i, i) += lambda * std::max(a(i, i), diag_floor);
            }
            const Vec step = damped.ldlt().solve(-g);
            candidate = prob.project(out.x + step);
            Vec rc(static_cast<Eigen::Index>(n_residuals));
            prob.evaluate(candidate, rc, nullptr);
            new_cost = rc.squaredNorm();
            if (std::isfinite(new_cost) && new_cost < out.cost) {
                accepted = true;
                lambda = std::max(lambda / 10.0, 1e-12);
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            // No descent direction left at any damping: a stationary point.
            out.converged = true;
            break;
        }
        const double rel = (out.cost - new_cost) / out.cost;
        out.x = candidate;
        out.cost = new_cost;
        out.history.push_back(new_cost);
        if (rel < opt.relative_tolerance) {
            out.converged = true;
            break;
        }
    }
    return out;
}

void require_finite_pairs(std::span<const std::pair<double, double>> pairs, const char* name)
{
    for (const auto& [a, b] : pairs) {
        if (!std::isfinite(a) || !std::isfinite(b)) {
            throw std::invalid_argument(std::string(name) + ": non-finite data");
        }
    }
}

}  // namespace

LogisticFit fit_logistic(std::span<const std::pair<double, double>> pairs, std::optional<LogisticParams> init,
                         const FitOptions& options)
{
    if (pairs.size() < 10) {
        throw std::invalid_argument("fit_logistic: at least 10 pairs are required");
    }
    require_finite_pairs(pairs, "fit_logistic");
    std::vector<double> zeta;
    std::vector<double> dmos;
    for (const auto& [z, d] : pairs) {
        zeta.push_back(z);
        dmos.push_back(d);
    }
    const auto [zmin_it, zmax_it] = std::minmax_element(zeta.begin(), zeta.end());
    const double zrange = *zmax_it - *zmin_it;
    if (!(zrange > 0.0)) {
        throw std::invalid_argument("fit_logistic: zeta values are all equal");
    }
    const auto [dmin_it, dmax_it] = std::minmax_element(dmos.begin(), dmos.end());

    Problem prob;
    prob.evaluate = [&](const Vec& x, Vec& r, Mat* jac) {
        for (std::size_t i = 0; i < zeta.size(); ++i) {
            const double z = zeta[i];
            const double s = 1.0 / (1.0 + clamped_exp(x[1] * (z - x[2])));
            const auto row = static_cast<Eigen::Index>(i);
            r[row] = x[0] * (0.5 - s) + x[3] * z + x[4] - dmos[i];
            if (jac != nullptr) {
                const double ds = s * (1.0 - s);
                (*jac)(row, 0) = 0.5 - s;
                (*jac)(row, 1) = x[0] * ds * (z - x[2]);
                (*jac)(row, 2) = -x[0] * ds * x[1];
                (*jac)(row, 3) = z;
                (*jac)(row, 4) = 1.0;
            }
        }
    };

    auto to_vec = [](const LogisticParams& p) {
        Vec v(5);
        for (int i = 0; i < 5; ++i) {
            v[i] = p.beta[static_cast<std::size_t>(i)];
        }
        return v;
    };

    std::vector<Vec> starts;
    if (init) {
        init->validate();
        starts.push_back(to_vec(*init));
    } else {
        // Linear regression of dmos on zeta.
        const double n = static_cast<double>(zeta.size());
        double mz = 0.0;
        double md = 0.0;
        for (std::size_t i = 0; i < zeta.size(); ++i) {
            mz += zeta[i];
            md += dmos[i];
        }
        mz /= n;
        md /= n;
        double szz = 0.0;
        double szd = 0.0;
        for (std::size_t i = 0; i < zeta.size(); ++i) {
            szz += (zeta[i] - mz) * (zeta[i] - mz);
            szd += (zeta[i] - mz) * (dmos[i] - md);
        }
        const double slope = szd / szz;
        const double intercept = md - slope * mz;

        std::vector<double> sorted = zeta;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2),
                         sorted.end());
        const double median = sorted[sorted.size() / 2];
        double direction = 1.0;
        try {
            direction = spearman(zeta, dmos) < 0.0 ? -1.0 : 1.0;
        } catch (const std::invalid_argument&) {
        }
        const double b1 = std::max(*dmax_it - *dmin_it, 1e-6);
        const double b2 = direction * 4.0 / zrange;

        Vec base(5);
        base << b1, b2, median, slope, intercept;
        starts.push_back(base);
        Vec steep = base;
        steep[1] *= 3.0;
        starts.push_back(steep);
        Vec low = base;
        low[2] = median - 0.25 * zrange;
        low[1] *= 0.5;
        starts.push_back(low);
        Vec high = base;
        high[2] = median + 0.25 * zrange;
        high[3] = 0.0;
        high[4] = md;
        starts.push_back(high);
        Vec linear(5);
        linear << 0.0, b2, median, slope, intercept;
        starts.push_back(linear);
    }

    LmOutcome best;
    best.cost = std::numeric_limits<double>::infinity();
    for (const Vec& s : starts) {
        LmOutcome o = levenberg_marquardt(prob, s, zeta.size(), options);
        if (o.cost < best.cost) {
            best = std::move(o);
        }
    }

    LogisticFit fit;
    for (int i = 0; i < 5; ++i) {
        fit.params.beta[static_cast<std::size_t>(i)] = best.x[i];
    }
    if (fit.params.beta[1] == 0.0) {
        fit.params.beta[1] = std::numeric_limits<double>::min();
    }
    fit.rmse = std::sqrt(best.cost / static_cast<double>(zeta.size()));
    fit.iterations = best.iterations;
    fit.converged = best.converged;
    fit.cost_history = std::move(best.history);
    return fit;
}

CanonicalFit fit_canonical(std::span<const std::pair<double, double>> blur_pairs, const FitOptions& options)
{
    require_finite_pairs(blur_pairs, "fit_canonical");
    std::vector<double> xi;
    std::vector<double> dmos;
    double xi_min = std::numeric_limits<double>::infinity();
    double xi_max = 0.0;
    for (const auto& [x, d] : blur_pairs) {
        if (x < 0.0) {
            throw std::invalid_argument("fit_canonical: negative xi");
        }
        xi.push_back(x);
        dmos.push_back(d);
        if (x > 0.0) {
            xi_min = std::min(xi_min, x);
            xi_max = std::max(xi_max, x);
        }
    }
    const auto positive = std::count_if(xi.begin(), xi.end(), [](double x) { return x > 0.0; });
    if (positive < 8) {
        throw std::invalid_argument("fit_canonical: at least 8 pairs with xi > 0 are required");
    }

    static constexpr double kQMin = 1e-9;
    static constexpr double kQMax = 3.0;
    static constexpr double kTauMin = 0.2;
    static constexpr double kTauMax = 2.0;

    Problem prob;
    prob.evaluate = [&](const Vec& p, Vec& r, Mat* jac) {
        const double q = p[0];
        const double tau = p[1];
        const double tau2 = tau * tau;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            const double a = xi[i] * xi[i] / (tau2 * tau2);
            const double g = 1.0 / std::sqrt(1.0 + a);
            const auto row = static_cast<Eigen::Index>(i);
            r[row] = 100.0 * q * (1.0 - g) - dmos[i];
            if (jac != nullptr) {
                (*jac)(row, 0) = 100.0 * (1.0 - g);
                (*jac)(row, 1) = -100.0 * q * 2.0 * xi[i] * xi[i] / (tau2 * tau2 * tau) * g * g * g;
            }
        }
    };
    prob.project = [](const Vec& p) {
        Vec c = p;
        c[0] = std::clamp(c[0], kQMin, kQMax);
        c[1] = std::clamp(c[1], kTauMin, kTauMax);
        return c;
    };

    Vec seed(2);
    double seed_cost = std::numeric_limits<double>::infinity();
    Vec r(static_cast<Eigen::Index>(xi.size()));
    for (int qi = 0; qi < 16; ++qi) {
        for (int ti = 0; ti < 16; ++ti) {
            Vec p(2);
            p << (qi + 1) * kQMax / 16.0, kTauMin + ti * (kTauMax - kTauMin) / 15.0;
            prob.evaluate(p, r, nullptr);
            const double c = r.squaredNorm();
            if (c < seed_cost) {
                seed_cost = c;
                seed = p;
            }
        }
    }

    const LmOutcome o = levenberg_marquardt(prob, seed, xi.size(), options);
    CanonicalFit fit;
    fit.q = o.x[0];
    fit.tau = o.x[1];
    fit.rmse = std::sqrt(o.cost / static_cast<double>(xi.size()));
    fit.iterations = o.iterations;
    fit.converged = o.converged;
    fit.cost_history = o.history;
    fit.unidentifiable = !(xi_max >= 10.0 * xi_min);
    return fit;
}

std::string to_json(const LogisticFit& fit)
{
    nlohmann::json doc = {
        {"model", "vqeg_logistic"},
        {"params", {{"beta", fit.params.beta}}},
        {"rmse", fit.rmse},
        {"converged", fit.converged},
        {"iterations", fit.iterations},
    };
    return doc.dump(2);
}

std::string to_json(const CanonicalFit& fit)
{
    nlohmann::json doc = {
        {"model", "canonical"},
        {"params", {{"q", fit.q}, {"tau", fit.tau}}},
        {"rmse", fit.rmse},
        {"converged", fit.converged},
        {"iterations", fit.iterations},
        {"unidentifiable", fit.unidentifiable},
    };
    return doc.dump(2);
}

}  // namespace liqa
