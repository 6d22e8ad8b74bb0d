#pragma once

#include "lexo/conjugate_model.hpp"
#include "lexo/forward_filter.hpp"
#include "lexo/hazard.hpp"
#include "lexo/param_estimator.hpp"
#include "lexo/smoother.hpp"

#include <cstddef>

namespace lexo {

struct DetectorOptions {
    std::size_t lag = 0;
    double prune_threshold = kDefaultPruneThreshold; // 0 disables pruning
    bool track_moments = true;
};

/// One stream: forward filter, lagged smoother and moment ladder.
///
/// Per observation the filter advances, the smoother and moment ladder
/// consume the unpruned filtered state, and only then is the filter pruned.
class Detector {
public:
    Detector(ConjugateModel model, HazardSpec hazard, DetectorOptions options = {});

    // Returns the lagged emission for time t - lag, or nullptr during warm-up.
    const SmoothedEmission* observe(double x);

    std::size_t time_index() const noexcept { return filter_.time_index(); }
    std::size_t lag() const noexcept { return options_.lag; }

    // Levels 0..depth() of the last ladder are available: level j holds the
    // LEXO-j posterior for time t - j.
    std::size_t depth() const noexcept { return smoother_.depth(); }
    const RunLengthDistribution& smoothed(std::size_t j) const { return smoother_.level(j); }
    ParameterEmission parameters(std::size_t j) const;

    const ForwardFilter& filter() const noexcept { return filter_; }
    const LexoSmoother& smoother() const noexcept { return smoother_; }
    const ParameterLadder& moment_ladder() const noexcept { return moments_; }
    const DetectorOptions& options() const noexcept { return options_; }

private:
    DetectorOptions options_;
    ForwardFilter filter_;
    LexoSmoother smoother_;
    ParameterLadder moments_;
};

} // namespace lexo
