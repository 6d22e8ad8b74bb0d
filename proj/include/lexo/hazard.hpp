#pragma once

#include <cstddef>

namespace lexo {

struct TransitionLogProbs {
    double changepoint; // log P(r_t = 0 | r_{t-1})
    double growth;      // log P(r_t = r_{t-1} + 1 | r_{t-1})
};

// Geometric gap prior with time scale lambda_gap. Its hazard is constant.
class HazardSpec {
public:
    static HazardSpec from_hazard(double hazard);
    static HazardSpec from_gap(double lambda_gap);

    double hazard() const noexcept { return hazard_; }
    double lambda_gap() const noexcept { return 1.0 / hazard_; }

    // Every other transition has probability zero. The run length argument
    // is unused for the geometric prior.
    TransitionLogProbs transition_log_probs(std::size_t previous_run_length) const noexcept;

private:
    explicit HazardSpec(double hazard);

    double hazard_;
    double log_hazard_;
    double log_survival_;
};

} // namespace lexo
