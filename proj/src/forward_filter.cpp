#include "lexo/forward_filter.hpp"

#include "lexo/error.hpp"
#include "lexo/log_math.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace lexo {

ForwardFilter::ForwardFilter(ConjugateModel model, HazardSpec hazard)
    : model_(std::move(model)), hazard_(hazard) {}

const RunLengthDistribution& ForwardFilter::update(double x) {
    model_.validate(x);
    if (time_ == 0) {
        init(x);
    } else {
        step(x);
    }
    refresh_filtered();
    return filtered_;
}

void ForwardFilter::init(double x) {
    const auto prior = model_.prior_stats();
    time_ = 1;
    run_lengths_.assign(1, 0);
    log_joint_.assign(1, model_.log_predictive(prior, x));
    stats_.assign(1, model_.absorb(prior, x));
    log_evidence_ = log_joint_.front();
}

void ForwardFilter::step(double x) {
    const auto prior = model_.prior_stats();
    const auto transition = hazard_.transition_log_probs(0);
    const std::size_t n = run_lengths_.size();

    next_run_lengths_.resize(n + 1);
    next_log_joint_.resize(n + 1);
    next_stats_.resize(n + 1);

    // Changepoint: every previous hypothesis funnels into r = 0, which
    // predicts x from the prior.
    next_run_lengths_[0] = 0;
    next_log_joint_[0] = log_sum_exp(log_joint_) + transition.changepoint + model_.log_predictive(prior, x);
    next_stats_[0] = model_.absorb(prior, x);

    // Growth: r -> r + 1 using the statistics of the continuing run.
    for (std::size_t i = 0; i < n; ++i) {
        next_run_lengths_[i + 1] = run_lengths_[i] + 1;
        next_log_joint_[i + 1] = log_joint_[i] + transition.growth + model_.log_predictive(stats_[i], x);
        next_stats_[i + 1] = model_.absorb(stats_[i], x);
    }

    run_lengths_.swap(next_run_lengths_);
    log_joint_.swap(next_log_joint_);
    stats_.swap(next_stats_);

    const double log_marginal = log_sum_exp(log_joint_);
    if (!std::isfinite(log_marginal)) throw NumericError("forward filter lost all probability mass");
    log_evidence_ = log_marginal;
    ++time_;
}

void ForwardFilter::refresh_filtered() {
    filtered_.time_index = time_;
    filtered_.run_lengths = run_lengths_;
    filtered_.log_probs.resize(log_joint_.size());
    for (std::size_t i = 0; i < log_joint_.size(); ++i) filtered_.log_probs[i] = log_joint_[i] - log_evidence_;
}

void ForwardFilter::prune(double threshold) {
    if (!(threshold >= 0.0 && threshold < 1.0)) throw std::invalid_argument("prune threshold must lie in [0, 1)");
    if (threshold == 0.0 || run_lengths_.empty()) return;

    const double log_threshold = std::log(threshold);
    const std::size_t map = filtered_.map_run_length();
    std::size_t kept = 0;
    for (std::size_t i = 0; i < run_lengths_.size(); ++i) {
        if (filtered_.log_probs[i] < log_threshold && run_lengths_[i] != map) continue;
        run_lengths_[kept] = run_lengths_[i];
        log_joint_[kept] = log_joint_[i];
        stats_[kept] = stats_[i];
        ++kept;
    }
    if (kept == run_lengths_.size()) return;
    run_lengths_.resize(kept);
    log_joint_.resize(kept);
    stats_.resize(kept);

    // Keep the evidence, rescale the survivors onto it.
    const double shift = log_evidence_ - log_sum_exp(log_joint_);
    for (double& lj : log_joint_) lj += shift;
    refresh_filtered();
}

} // namespace lexo
