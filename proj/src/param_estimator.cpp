#include "lexo/param_estimator.hpp"

#include "lexo/error.hpp"
#include "lexo/log_math.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace lexo {

void level0_moments(const ConjugateModel& model, std::span<const SufficientStats> stats, std::size_t time_index,
                    MomentTable& out) {
    out.time_index = time_index;
    out.moments.resize(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        out.moments[i] = {model.posterior_moment(stats[i], 1), model.posterior_moment(stats[i], 2)};
    }
}

MomentTable level0_moments(const ConjugateModel& model, std::span<const SufficientStats> stats,
                           std::size_t time_index) {
    MomentTable table;
    level0_moments(model, stats, time_index, table);
    return table;
}

void ladder_moments_level(const RunLengthDistribution& filtered, const MomentTable& level0,
                          const RunLengthDistribution& upper, const MomentTable& upper_moments,
                          MomentTable& out, std::vector<double>* alpha) {
    const std::size_t s = filtered.time_index;
    if (level0.time_index != s || upper.time_index != s + 1 || upper_moments.time_index != s + 1) {
        throw SequencingError("moment ladder inputs are not aligned at time " + std::to_string(s));
    }
    if (level0.moments.size() != filtered.size() || upper_moments.moments.size() != upper.size()) {
        throw SequencingError("moment table does not match its run-length support at time " + std::to_string(s));
    }

    const double log_restart = upper.log_prob_zero();
    const std::size_t n = filtered.size();
    out.time_index = s;
    out.moments.resize(n);
    if (alpha) alpha->resize(n);

    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t successor = filtered.run_lengths[i] + 1;
        while (k < upper.size() && upper.run_lengths[k] < successor) ++k;
        const bool continues = k < upper.size() && upper.run_lengths[k] == successor;

        const double log_a1 = filtered.log_probs[i] + log_restart;
        const double log_a2 = continues ? upper.log_probs[k] : kLogZero;
        double a = 0.0;
        if (log_a1 != kLogZero) {
            a = log_a2 == kLogZero ? 1.0 : 1.0 / (1.0 + std::exp(log_a2 - log_a1));
        }
        const RunMoments here = level0.moments[i];
        const RunMoments next = continues ? upper_moments.moments[k] : here;
        out.moments[i] = {a * here.m1 + (1.0 - a) * next.m1, a * here.m2 + (1.0 - a) * next.m2};
        if (alpha) (*alpha)[i] = a;
    }
}

ParameterEmission posterior_moments(const MomentTable& moments, const RunLengthDistribution& dist) {
    if (moments.time_index != dist.time_index || moments.moments.size() != dist.size()) {
        throw SequencingError("moment table and run-length distribution are not aligned");
    }
    ParameterEmission e;
    e.emit_time = dist.time_index;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double w = std::exp(dist.log_probs[i]);
        m1 += w * moments.moments[i].m1;
        m2 += w * moments.moments[i].m2;
    }
    e.posterior_mean = m1;
    const double var = m2 - m1 * m1;
    e.posterior_variance = var > 0.0 ? var : 0.0;
    return e;
}

double posterior_mse(const ParameterEmission& emission, double truth) {
    if (!std::isfinite(truth)) throw std::invalid_argument("true parameter must be finite");
    const double bias = emission.posterior_mean - truth;
    return bias * bias + emission.posterior_variance;
}

ParameterLadder::ParameterLadder(std::size_t lag)
    : lag_(lag), level0_(lag + 1), levels_(lag + 1), alphas_(lag + 1) {}

void ParameterLadder::push_level0(MomentTable table) {
    level0_.push_slot() = std::move(table);
}

const MomentTable& ParameterLadder::level(std::size_t j) const {
    if (j > depth_ || level0_.empty()) throw std::out_of_range("moment ladder level not available");
    return j == 0 ? level0_.back(0) : levels_[j];
}

std::span<const double> ParameterLadder::alphas(std::size_t j) const {
    if (j > depth_) throw std::out_of_range("moment ladder level not available");
    return alphas_[j];
}

void ParameterLadder::update(const LexoSmoother& smoother) {
    const std::size_t target = smoother.depth();
    if (target > lag_ || level0_.empty() || target >= level0_.size() ||
        level0_.back(0).time_index != smoother.newest_time()) {
        throw SequencingError("moment ladder is out of step with the smoother");
    }
    alphas_[0].clear();
    for (std::size_t j = 1; j <= target; ++j) {
        depth_ = j - 1;
        ladder_moments_level(smoother.filtered(j), level0_.back(j), smoother.level(j - 1), level(j - 1), levels_[j],
                             &alphas_[j]);
    }
    depth_ = target;
}

ParameterEmission ParameterLadder::emission(const LexoSmoother& smoother, std::size_t j) const {
    auto e = posterior_moments(level(j), smoother.level(j));
    const auto a = alphas(j);
    e.alpha.assign(a.begin(), a.end());
    return e;
}

} // namespace lexo
