#include "lexo/oracle.hpp"

#include "lexo/error.hpp"
#include "lexo/log_math.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace lexo {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

struct GaussianPrior {
    double mean;
    double precision;
    double tau;
};

struct GammaPrior {
    double shape;
    double rate;
};

// Hyperparameters recovered from the natural form, independently of the
// model's own accessors.
GaussianPrior gaussian_prior(const ConjugateModel& model) {
    const double tau = model.fixed_parameter();
    return {model.prior().chi / model.prior().nu, model.prior().nu * tau, tau};
}

GammaPrior gamma_prior(const ConjugateModel& model) {
    if (model.family() == ModelFamily::GaussianPrecisionShift) return {0.5 * model.prior().nu, model.prior().chi};
    return {model.prior().chi, model.prior().nu};
}

struct Weighted {
    double log_weight;
    std::size_t run_length;
    RunMoments moments;
};

} // namespace

double segment_log_marginal(const ConjugateModel& model, std::span<const double> segment) {
    const double n = static_cast<double>(segment.size());
    if (segment.empty()) return 0.0;
    switch (model.family()) {
    case ModelFamily::GaussianMeanShift: {
        const auto p = gaussian_prior(model);
        double sum = 0.0;
        for (double y : segment) sum += y;
        const double ybar = sum / n;
        double ss = 0.0;
        for (double y : segment) ss += (y - ybar) * (y - ybar);
        const double post_precision = p.precision + n * p.tau;
        return 0.5 * n * (std::log(p.tau) - kLogTwoPi) + 0.5 * std::log(p.precision / post_precision) -
               0.5 * p.tau * ss - 0.5 * n * p.tau * p.precision / post_precision * (ybar - p.mean) * (ybar - p.mean);
    }
    case ModelFamily::GaussianPrecisionShift: {
        const auto g = gamma_prior(model);
        const double m = model.fixed_parameter();
        double ss = 0.0;
        for (double y : segment) ss += (y - m) * (y - m);
        const double a = g.shape + 0.5 * n;
        return g.shape * std::log(g.rate) - std::lgamma(g.shape) + std::lgamma(a) - a * std::log(g.rate + 0.5 * ss) -
               0.5 * n * kLogTwoPi;
    }
    case ModelFamily::PoissonGamma: {
        const auto g = gamma_prior(model);
        double sum = 0.0;
        double log_factorials = 0.0;
        for (double y : segment) {
            sum += y;
            log_factorials += std::lgamma(y + 1.0);
        }
        return g.shape * std::log(g.rate) - std::lgamma(g.shape) + std::lgamma(g.shape + sum) -
               (g.shape + sum) * std::log(g.rate + n) - log_factorials;
    }
    }
    throw std::logic_error("unreachable");
}

RunMoments segment_moments(const ConjugateModel& model, std::span<const double> segment) {
    const double n = static_cast<double>(segment.size());
    switch (model.family()) {
    case ModelFamily::GaussianMeanShift: {
        const auto p = gaussian_prior(model);
        double sum = 0.0;
        for (double y : segment) sum += y;
        const double precision = p.precision + n * p.tau;
        const double mean = (p.precision * p.mean + p.tau * sum) / precision;
        return {mean, mean * mean + 1.0 / precision};
    }
    case ModelFamily::GaussianPrecisionShift: {
        const auto g = gamma_prior(model);
        const double m = model.fixed_parameter();
        double ss = 0.0;
        for (double y : segment) ss += (y - m) * (y - m);
        const double a = g.shape + 0.5 * n;
        const double b = g.rate + 0.5 * ss;
        return {a / b, a * (a + 1.0) / (b * b)};
    }
    case ModelFamily::PoissonGamma: {
        const auto g = gamma_prior(model);
        double sum = 0.0;
        for (double y : segment) sum += y;
        const double a = g.shape + sum;
        const double b = g.rate + n;
        return {a / b, a * (a + 1.0) / (b * b)};
    }
    }
    throw std::logic_error("unreachable");
}

OracleResult enumerate_posterior(const ConjugateModel& model, const HazardSpec& hazard, std::span<const double> data,
                                 std::size_t query_time, std::size_t condition_time) {
    if (data.size() > kOracleMaxLength || condition_time > kOracleMaxLength) {
        throw OracleLimitError("enumeration is limited to " + std::to_string(kOracleMaxLength) + " observations");
    }
    if (query_time == 0 || query_time > condition_time || condition_time > data.size()) {
        throw std::invalid_argument("oracle query requires 1 <= s <= t <= n");
    }
    for (double x : data.first(condition_time)) model.validate(x);

    const std::size_t t = condition_time;
    const std::size_t s = query_time;
    const auto observed = data.first(t);
    const double log_h = std::log(hazard.hazard());
    const double log_stay = std::log1p(-hazard.hazard());

    // Bit i of the mask marks a changepoint at time i + 2 (1-based).
    const std::uint32_t masks = std::uint32_t{1} << (t - 1);
    std::vector<Weighted> terms;
    terms.reserve(masks);
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
        double log_weight = 0.0;
        std::size_t start = 0; // 0-based start of the current segment
        std::size_t query_start = 0;
        std::size_t query_end = t;
        for (std::size_t i = 1; i <= t; ++i) {
            const bool boundary = i == t || ((mask >> (i - 1)) & 1U);
            if (i < t) log_weight += boundary ? log_h : log_stay;
            if (!boundary) continue;
            log_weight += segment_log_marginal(model, observed.subspan(start, i - start));
            if (start < s && s <= i) {
                query_start = start;
                query_end = i;
            }
            start = i;
        }
        const auto query_segment = observed.subspan(query_start, query_end - query_start);
        terms.push_back({log_weight, (s - 1) - query_start, segment_moments(model, query_segment)});
    }

    OracleResult result;
    result.query_time = s;
    result.condition_time = t;
    result.log_probs.assign(s, kLogZero);
    result.moments.assign(s, RunMoments{});

    std::vector<double> all(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) all[i] = terms[i].log_weight;
    result.log_evidence = log_sum_exp(all);

    std::vector<double> peak(s, kLogZero);
    for (const auto& term : terms) peak[term.run_length] = std::max(peak[term.run_length], term.log_weight);
    std::vector<double> mass(s, 0.0);
    for (const auto& term : terms) {
        const double w = std::exp(term.log_weight - peak[term.run_length]);
        mass[term.run_length] += w;
        result.moments[term.run_length].m1 += w * term.moments.m1;
        result.moments[term.run_length].m2 += w * term.moments.m2;
    }
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t r = 0; r < s; ++r) {
        if (mass[r] == 0.0) continue;
        result.log_probs[r] = peak[r] + std::log(mass[r]) - result.log_evidence;
        result.moments[r].m1 /= mass[r];
        result.moments[r].m2 /= mass[r];
        const double p = std::exp(result.log_probs[r]);
        m1 += p * result.moments[r].m1;
        m2 += p * result.moments[r].m2;
    }
    result.posterior_mean = m1;
    result.posterior_variance = std::max(0.0, m2 - m1 * m1);
    return result;
}

} // namespace lexo
