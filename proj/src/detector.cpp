#include "lexo/detector.hpp"

#include <stdexcept>
#include <utility>

namespace lexo {

Detector::Detector(ConjugateModel model, HazardSpec hazard, DetectorOptions options)
    : options_(options), filter_(std::move(model), hazard), smoother_(options.lag), moments_(options.lag) {
    if (!(options.prune_threshold >= 0.0 && options.prune_threshold < 1.0)) {
        throw std::invalid_argument("prune threshold must lie in [0, 1)");
    }
}

const SmoothedEmission* Detector::observe(double x) {
    const auto& filtered = filter_.update(x);
    if (options_.track_moments) {
        level0_moments(filter_.model(), filter_.stats(), filtered.time_index, moments_.push_level0_slot());
    }
    const SmoothedEmission* emission = smoother_.smooth_step(filtered);
    if (options_.track_moments) moments_.update(smoother_);
    filter_.prune(options_.prune_threshold);
    return emission;
}

ParameterEmission Detector::parameters(std::size_t j) const {
    if (!options_.track_moments) throw std::logic_error("detector was built without moment tracking");
    return moments_.emission(smoother_, j);
}

} // namespace lexo
