#include "lexo/smoother.hpp"

#include "lexo/error.hpp"
#include "lexo/log_math.hpp"

#include <cmath>
#include <string>

namespace lexo {

LexoSmoother::LexoSmoother(std::size_t lag) : lag_(lag), filtered_(lag + 1), ladder_(lag + 1) {}

const RunLengthDistribution& LexoSmoother::level(std::size_t j) const {
    if (j > depth_ || filtered_.empty()) throw std::out_of_range("ladder level not available");
    return j == 0 ? filtered_.back(0) : ladder_[j];
}

void ladder_level(const RunLengthDistribution& filtered, const RunLengthDistribution& upper,
                  RunLengthDistribution& out) {
    if (upper.time_index != filtered.time_index + 1) {
        throw SequencingError("ladder level at time " + std::to_string(filtered.time_index) +
                              " paired with level at time " + std::to_string(upper.time_index));
    }
    const double log_restart = upper.log_prob_zero();
    const std::size_t n = filtered.size();
    out.time_index = filtered.time_index;
    out.run_lengths = filtered.run_lengths;
    out.log_probs.resize(n);

    // Both supports are ascending, so a single forward scan finds r + 1.
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t successor = filtered.run_lengths[i] + 1;
        while (k < upper.size() && upper.run_lengths[k] < successor) ++k;
        const double log_continue =
            (k < upper.size() && upper.run_lengths[k] == successor) ? upper.log_probs[k] : kLogZero;
        out.log_probs[i] = log_add(log_continue, filtered.log_probs[i] + log_restart);
    }
    out.normalize();
}

void LexoSmoother::build_level(std::size_t j) {
    ladder_level(filtered_.back(j), level(j - 1), ladder_[j]);
}

const SmoothedEmission* LexoSmoother::smooth_step(const RunLengthDistribution& newest_filtered) {
    const std::size_t expected = newest_time() + 1;
    if (newest_filtered.time_index != expected) {
        throw SequencingError("expected filtered distribution for time " + std::to_string(expected) + ", got " +
                              std::to_string(newest_filtered.time_index));
    }
    filtered_.push_slot() = newest_filtered;

    const std::size_t available = filtered_.size() - 1;
    depth_ = 0;
    const std::size_t target = available < lag_ ? available : lag_;
    for (std::size_t j = 1; j <= target; ++j) {
        depth_ = j - 1;
        build_level(j);
    }
    depth_ = target;

    if (available < lag_) return nullptr;

    const RunLengthDistribution& top = level(lag_);
    emission_.emit_time = top.time_index;
    emission_.distribution = top;
    emission_.map_run_length = top.map_run_length();
    emission_.changepoint_prob = std::exp(top.log_prob_zero());
    return &emission_;
}

std::vector<MapPoint> map_trace(std::span<const SmoothedEmission> emissions) {
    std::vector<MapPoint> trace;
    trace.reserve(emissions.size());
    for (const auto& e : emissions) trace.push_back({e.emit_time, e.map_run_length});
    return trace;
}

std::vector<DeclaredChangepoint> declare_changepoints(std::span<const MapPoint> trace, std::size_t gap) {
    std::vector<DeclaredChangepoint> out;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        if (trace[i].run_length + gap < trace[i - 1].run_length) {
            out.push_back({trace[i].time, trace[i].time - trace[i].run_length});
        }
    }
    return out;
}

} // namespace lexo
