#include "lexo/hazard.hpp"

#include <cmath>
#include <stdexcept>

namespace lexo {

HazardSpec::HazardSpec(double hazard)
    : hazard_(hazard), log_hazard_(std::log(hazard)), log_survival_(std::log1p(-hazard)) {}

HazardSpec HazardSpec::from_hazard(double hazard) {
    if (!(hazard > 0.0 && hazard < 1.0)) throw std::invalid_argument("hazard must lie in (0, 1)");
    return HazardSpec(hazard);
}

HazardSpec HazardSpec::from_gap(double lambda_gap) {
    if (!(lambda_gap > 1.0) || !std::isfinite(lambda_gap)) {
        throw std::invalid_argument("geometric gap scale must be finite and greater than 1");
    }
    return HazardSpec(1.0 / lambda_gap);
}

TransitionLogProbs HazardSpec::transition_log_probs(std::size_t) const noexcept {
    return {log_hazard_, log_survival_};
}

} // namespace lexo
