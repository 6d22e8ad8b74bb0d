#include "lexo/conjugate_model.hpp"

#include "lexo/error.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lexo {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

std::string_view to_string(ModelFamily family) noexcept {
    switch (family) {
    case ModelFamily::GaussianMeanShift: return "gaussian-mean";
    case ModelFamily::GaussianPrecisionShift: return "gaussian-precision";
    case ModelFamily::PoissonGamma: return "poisson";
    }
    return "unknown";
}

ModelFamily parse_family(std::string_view name) {
    if (name == "gaussian-mean") return ModelFamily::GaussianMeanShift;
    if (name == "gaussian-precision") return ModelFamily::GaussianPrecisionShift;
    if (name == "poisson") return ModelFamily::PoissonGamma;
    throw std::invalid_argument("unknown model family '" + std::string(name) + "'");
}

ConjugateModel::ConjugateModel(ModelFamily family, PriorHyperparameters prior, double fixed)
    : family_(family), prior_(prior), fixed_(fixed) {
    require(std::isfinite(prior.chi) && std::isfinite(prior.nu) && std::isfinite(fixed),
            "hyperparameters must be finite");
    require(prior.nu >= 0.0, "prior pseudo-count must be nonnegative");
    switch (family) {
    case ModelFamily::GaussianMeanShift:
        require(prior.nu > 0.0, "prior precision must be positive");
        require(fixed > 0.0, "known observation precision must be positive");
        break;
    case ModelFamily::GaussianPrecisionShift:
        require(prior.nu > 0.0 && prior.chi > 0.0, "gamma shape and rate must be positive");
        break;
    case ModelFamily::PoissonGamma:
        require(prior.nu > 0.0 && prior.chi > 0.0, "gamma shape and rate must be positive");
        break;
    }
}

ConjugateModel ConjugateModel::gaussian_mean_shift(double prior_mean, double prior_precision,
                                                   double known_precision) {
    require(prior_precision > 0.0, "prior precision must be positive");
    require(known_precision > 0.0, "known observation precision must be positive");
    const double nu = prior_precision / known_precision;
    return ConjugateModel(ModelFamily::GaussianMeanShift, {prior_mean * nu, nu}, known_precision);
}

ConjugateModel ConjugateModel::gaussian_precision_shift(double shape, double rate, double known_mean) {
    require(shape > 0.0 && rate > 0.0, "gamma shape and rate must be positive");
    return ConjugateModel(ModelFamily::GaussianPrecisionShift, {rate, 2.0 * shape}, known_mean);
}

ConjugateModel ConjugateModel::poisson_gamma(double shape, double rate) {
    require(shape > 0.0 && rate > 0.0, "gamma shape and rate must be positive");
    return ConjugateModel(ModelFamily::PoissonGamma, {shape, rate}, 0.0);
}

ConjugateModel ConjugateModel::from_natural(ModelFamily family, PriorHyperparameters prior, double fixed) {
    return ConjugateModel(family, prior, fixed);
}

ConjugateModel ConjugateModel::with_defaults(ModelFamily family) {
    switch (family) {
    case ModelFamily::GaussianMeanShift: return gaussian_mean_shift();
    case ModelFamily::GaussianPrecisionShift: return gaussian_precision_shift();
    case ModelFamily::PoissonGamma: return poisson_gamma();
    }
    throw std::invalid_argument("unknown model family");
}

void ConjugateModel::validate(double x) const {
    if (!std::isfinite(x)) throw DomainError("observation is not finite");
    if (family_ == ModelFamily::PoissonGamma && (x < 0.0 || std::floor(x) != x)) {
        throw DomainError("poisson observation must be a nonnegative integer, got " + std::to_string(x));
    }
}

double ConjugateModel::sufficient_statistic(double x) const noexcept {
    if (family_ == ModelFamily::GaussianPrecisionShift) {
        const double d = x - fixed_;
        return 0.5 * d * d;
    }
    return x;
}

SufficientStats ConjugateModel::absorb(const SufficientStats& stats, double x) const {
    validate(x);
    return {stats.chi + sufficient_statistic(x), stats.nu + 1.0};
}

GammaParams ConjugateModel::gamma_params(const SufficientStats& stats) const {
    switch (family_) {
    case ModelFamily::GaussianPrecisionShift: return {0.5 * stats.nu, stats.chi};
    case ModelFamily::PoissonGamma: return {stats.chi, stats.nu};
    default: throw std::logic_error("model has no gamma posterior");
    }
}

NormalParams ConjugateModel::normal_params(const SufficientStats& stats) const {
    if (family_ != ModelFamily::GaussianMeanShift) throw std::logic_error("model has no normal posterior");
    return {stats.chi / stats.nu, stats.nu * fixed_};
}

double ConjugateModel::log_predictive(const SufficientStats& stats, double x) const {
    validate(x);
    switch (family_) {
    case ModelFamily::GaussianMeanShift: {
        const auto post = normal_params(stats);
        const double var = 1.0 / fixed_ + 1.0 / post.precision;
        const double d = x - post.mean;
        return -0.5 * (kLogTwoPi + std::log(var) + d * d / var);
    }
    case ModelFamily::GaussianPrecisionShift: {
        // Student-t with 2a degrees of freedom, location m, scale^2 = b/a.
        const auto [a, b] = gamma_params(stats);
        const double d = x - fixed_;
        return std::lgamma(a + 0.5) - std::lgamma(a) - 0.5 * (kLogTwoPi + std::log(b)) -
               (a + 0.5) * std::log1p(0.5 * d * d / b);
    }
    case ModelFamily::PoissonGamma: {
        // Negative binomial with size a and success probability b/(b+1).
        const auto [a, b] = gamma_params(stats);
        return std::lgamma(a + x) - std::lgamma(a) - std::lgamma(x + 1.0) + a * (std::log(b) - std::log1p(b)) -
               x * std::log1p(b);
    }
    }
    throw std::logic_error("unreachable");
}

double ConjugateModel::posterior_moment(const SufficientStats& stats, int order) const {
    if (order != 1 && order != 2) {
        throw UnsupportedOrderError("posterior moments are available for orders 1 and 2, got " +
                                    std::to_string(order));
    }
    if (family_ == ModelFamily::GaussianMeanShift) {
        const auto post = normal_params(stats);
        return order == 1 ? post.mean : post.mean * post.mean + 1.0 / post.precision;
    }
    const auto [a, b] = gamma_params(stats);
    return order == 1 ? a / b : a * (a + 1.0) / (b * b);
}

} // namespace lexo
