#pragma once

#include "lexo/conjugate_model.hpp"
#include "lexo/hazard.hpp"
#include "lexo/run_length.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lexo {

inline constexpr double kDefaultPruneThreshold = 1e-5;

/// Exact forward run-length filter.
///
/// Maintains the joint weights log P(r_t, x_{1:t}) over the retained run
/// lengths together with one set of sufficient statistics per run length.
/// The statistics stored for run length r at time t have absorbed the
/// r + 1 observations x_{t-r}, ..., x_t of the current regime, so they serve
/// both as the posterior of the regime parameter at t and as the predictive
/// state for extending the run at t + 1. A new regime always predicts from
/// the prior.
///
/// All weights live in log space. One writer owns a filter; independent
/// streams use independent filters.
class ForwardFilter {
public:
    ForwardFilter(ConjugateModel model, HazardSpec hazard);

    // Consumes the next observation: the initial step at t = 1, a forward
    // recursion step afterwards. Returns the normalised filtered posterior
    // P(r_t | x_{1:t}), valid until the next call.
    const RunLengthDistribution& update(double x);

    // Drops run lengths whose filtered probability is below threshold, then
    // renormalises the survivors against the running evidence. The MAP run
    // length is always kept.
    void prune(double threshold);

    std::size_t time_index() const noexcept { return time_; }
    double log_evidence() const noexcept { return log_evidence_; }

    const RunLengthDistribution& filtered() const noexcept { return filtered_; }
    std::span<const double> log_joint() const noexcept { return log_joint_; }
    std::span<const SufficientStats> stats() const noexcept { return stats_; }

    const ConjugateModel& model() const noexcept { return model_; }
    const HazardSpec& hazard() const noexcept { return hazard_; }

private:
    void init(double x);
    void step(double x);
    void refresh_filtered();

    ConjugateModel model_;
    HazardSpec hazard_;

    std::size_t time_ = 0;
    double log_evidence_ = 0.0;
    std::vector<std::size_t> run_lengths_;
    std::vector<double> log_joint_;
    std::vector<SufficientStats> stats_;
    RunLengthDistribution filtered_;

    // Double buffers for the step.
    std::vector<std::size_t> next_run_lengths_;
    std::vector<double> next_log_joint_;
    std::vector<SufficientStats> next_stats_;
};

} // namespace lexo
