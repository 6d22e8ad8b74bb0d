#pragma once

#include <string_view>

namespace lexo {

enum class ModelFamily {
    GaussianMeanShift,      // N(mu, 1/tau), tau known, mu ~ Normal
    GaussianPrecisionShift, // N(m, 1/xi2), m known, xi2 ~ Gamma
    PoissonGamma,           // Poisson(lambda), lambda ~ Gamma
};

std::string_view to_string(ModelFamily family) noexcept;
ModelFamily parse_family(std::string_view name);

// Conjugate prior in natural form: a pseudo sufficient statistic chi and a
// pseudo count nu. All built-in families have a one-dimensional chi.
struct PriorHyperparameters {
    double chi = 0.0;
    double nu = 0.0;
};

// Posterior bookkeeping for one run: chi = chi_prior + sum U(x),
// nu = nu_prior + number of absorbed observations.
struct SufficientStats {
    double chi = 0.0;
    double nu = 0.0;

    friend bool operator==(const SufficientStats&, const SufficientStats&) = default;
};

struct GammaParams {
    double shape;
    double rate;
};

struct NormalParams {
    double mean;
    double precision;
};

/// Exponential-family observation model with its conjugate prior.
///
/// The natural-form hyperparameters map onto the familiar parameterisations
/// as follows (tau is the known observation precision, m the known mean):
///
///   GaussianMeanShift       U(x) = x            mean = chi/nu, precision = nu*tau
///   GaussianPrecisionShift  U(x) = (x-m)^2/2    shape = nu/2,  rate = chi
///   PoissonGamma            U(x) = x            shape = chi,   rate = nu
///
/// Moments are reported on the natural scale of the regime parameter: the
/// mean mu, the precision xi^2 and the rate lambda respectively.
///
/// Instances are immutable; every operation is a pure function.
class ConjugateModel {
public:
    static ConjugateModel gaussian_mean_shift(double prior_mean = 0.0, double prior_precision = 1e-4,
                                              double known_precision = 1.0);
    static ConjugateModel gaussian_precision_shift(double shape = 1.0, double rate = 1e-4,
                                                   double known_mean = 0.0);
    static ConjugateModel poisson_gamma(double shape = 1.0, double rate = 1e-4);

    // Builds a model directly from natural hyperparameters. `fixed` is the
    // known precision (mean shift), the known mean (precision shift) and is
    // ignored for the Poisson family.
    static ConjugateModel from_natural(ModelFamily family, PriorHyperparameters prior, double fixed);

    // Family defaults: diffuse but proper priors.
    static ConjugateModel with_defaults(ModelFamily family);

    ModelFamily family() const noexcept { return family_; }
    const PriorHyperparameters& prior() const noexcept { return prior_; }
    double fixed_parameter() const noexcept { return fixed_; }

    SufficientStats prior_stats() const noexcept { return {prior_.chi, prior_.nu}; }

    // Throws DomainError unless x lies in the observation space.
    void validate(double x) const;

    double log_predictive(const SufficientStats& stats, double x) const;
    SufficientStats absorb(const SufficientStats& stats, double x) const;

    // E[eta^order] under the posterior defined by stats, order in {1, 2}.
    double posterior_moment(const SufficientStats& stats, int order) const;

    // Family-specific views of a posterior. Throw std::logic_error when the
    // family does not match.
    GammaParams gamma_params(const SufficientStats& stats) const;
    NormalParams normal_params(const SufficientStats& stats) const;

private:
    ConjugateModel(ModelFamily family, PriorHyperparameters prior, double fixed);

    double sufficient_statistic(double x) const noexcept;

    ModelFamily family_;
    PriorHyperparameters prior_;
    double fixed_;
};

} // namespace lexo
