#pragma once

// Test-only reference: normalising constants and parameter moments of
// prior x likelihood computed by adaptive quadrature. Shares no code with
// the conjugate closed forms it checks.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace lexo::testing {

enum class QuadFamily { NormalMean, NormalPrecision, PoissonRate };

struct QuadPrior {
    QuadFamily family;
    // NormalMean: (mean, precision); others: gamma (shape, rate)
    double p1;
    double p2;
    // NormalMean: known observation precision; NormalPrecision: known mean
    double fixed = 0.0;
};

struct QuadResult {
    double log_z; // log of the integral of prior x likelihood
    double m1;
    double m2;
};

inline double log_prior(const QuadPrior& p, double eta) {
    if (p.family == QuadFamily::NormalMean) {
        const double d = eta - p.p1;
        return 0.5 * std::log(p.p2 / (2.0 * M_PI)) - 0.5 * p.p2 * d * d;
    }
    if (eta <= 0.0) return -INFINITY;
    return p.p1 * std::log(p.p2) - std::lgamma(p.p1) + (p.p1 - 1.0) * std::log(eta) - p.p2 * eta;
}

inline double log_likelihood(const QuadPrior& p, double eta, std::span<const double> data) {
    double acc = 0.0;
    for (double x : data) {
        switch (p.family) {
        case QuadFamily::NormalMean: {
            const double d = x - eta;
            acc += 0.5 * std::log(p.fixed / (2.0 * M_PI)) - 0.5 * p.fixed * d * d;
            break;
        }
        case QuadFamily::NormalPrecision: {
            const double d = x - p.fixed;
            acc += 0.5 * std::log(eta / (2.0 * M_PI)) - 0.5 * eta * d * d;
            break;
        }
        case QuadFamily::PoissonRate: acc += x * std::log(eta) - eta - std::lgamma(x + 1.0); break;
        }
    }
    return acc;
}

// Integrates over u, where eta = u (normal mean) or eta = exp(u) (positive
// parameters). The integrand is log-concave in u for all three families, so a
// window of +-50 curvature widths around the mode captures everything.
inline QuadResult integrate(const QuadPrior& p, std::span<const double> data) {
    const bool positive = p.family != QuadFamily::NormalMean;
    auto log_f = [&](double u) {
        const double eta = positive ? std::exp(u) : u;
        return log_prior(p, eta) + log_likelihood(p, eta, data) + (positive ? u : 0.0);
    };

    // Mode by grid search then golden-section refinement.
    double lo = positive ? -60.0 : -1e4;
    double hi = positive ? 60.0 : 1e4;
    double best = lo;
    double best_val = -INFINITY;
    const int grid = 20000;
    for (int i = 0; i <= grid; ++i) {
        const double u = lo + (hi - lo) * i / grid;
        const double v = log_f(u);
        if (v > best_val) {
            best_val = v;
            best = u;
        }
    }
    double a = best - (hi - lo) / grid;
    double b = best + (hi - lo) / grid;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200; ++it) {
        const double c = b - g * (b - a);
        const double d = a + g * (b - a);
        if (log_f(c) > log_f(d)) {
            b = d;
        } else {
            a = c;
        }
    }
    const double mode = 0.5 * (a + b);
    const double peak = log_f(mode);

    // Curvature width.
    const double h = 1e-3 * std::max(1.0, std::abs(mode));
    const double curv = -(log_f(mode + h) - 2.0 * peak + log_f(mode - h)) / (h * h);
    const double width = curv > 0.0 ? 1.0 / std::sqrt(curv) : 1.0;
    const double from = mode - 50.0 * width;
    const double to = mode + 50.0 * width;

    using boost::math::quadrature::gauss_kronrod;
    auto moment = [&](int k) {
        return gauss_kronrod<double, 61>::integrate(
            [&](double u) {
                const double eta = positive ? std::exp(u) : u;
                return std::pow(eta, k) * std::exp(log_f(u) - peak);
            },
            from, to, 20, 1e-14);
    };
    const double z = moment(0);
    return {peak + std::log(z), moment(1) / z, moment(2) / z};
}

// log P(x | data) = log Z(data + x) - log Z(data).
inline double log_predictive(const QuadPrior& p, std::span<const double> data, double x) {
    std::vector<double> extended(data.begin(), data.end());
    extended.push_back(x);
    return integrate(p, extended).log_z - integrate(p, data).log_z;
}

} // namespace lexo::testing
