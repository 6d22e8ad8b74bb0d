#include "lexo/run_length.hpp"

#include "lexo/error.hpp"
#include "lexo/log_math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lexo {

double RunLengthDistribution::log_prob(std::size_t run_length) const noexcept {
    const auto it = std::lower_bound(run_lengths.begin(), run_lengths.end(), run_length);
    if (it == run_lengths.end() || *it != run_length) return kLogZero;
    return log_probs[static_cast<std::size_t>(it - run_lengths.begin())];
}

double RunLengthDistribution::prob(std::size_t run_length) const noexcept {
    return std::exp(log_prob(run_length));
}

bool RunLengthDistribution::contains(std::size_t run_length) const noexcept {
    return std::binary_search(run_lengths.begin(), run_lengths.end(), run_length);
}

double RunLengthDistribution::log_prob_zero() const noexcept {
    return (!run_lengths.empty() && run_lengths.front() == 0) ? log_probs.front() : kLogZero;
}

std::size_t RunLengthDistribution::map_run_length() const {
    if (run_lengths.empty()) throw std::logic_error("MAP of an empty run-length distribution");
    std::size_t best = 0;
    for (std::size_t i = 1; i < log_probs.size(); ++i) {
        if (log_probs[i] > log_probs[best]) best = i;
    }
    return run_lengths[best];
}

double RunLengthDistribution::log_total_mass() const noexcept {
    return log_sum_exp(log_probs);
}

double RunLengthDistribution::total_mass() const noexcept {
    return std::exp(log_total_mass());
}

void RunLengthDistribution::normalize() {
    const double log_mass = log_total_mass();
    if (!std::isfinite(log_mass)) throw NumericError("run-length distribution has no finite mass");
    for (double& lp : log_probs) lp -= log_mass;
}

} // namespace lexo
