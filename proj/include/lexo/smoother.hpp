#pragma once

#include "lexo/ring_buffer.hpp"
#include "lexo/run_length.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lexo {

struct SmoothedEmission {
    std::size_t emit_time = 0;
    RunLengthDistribution distribution; // P(r_{t-lag} | x_{1:t})
    std::size_t map_run_length = 0;
    double changepoint_prob = 0.0;      // P(r_{t-lag} = 0 | x_{1:t})
};

/// Lagged backward ladder over the filtered run-length posteriors.
///
/// Keeps the last lag + 1 filtered distributions. After each new filtered
/// distribution at time t it rebuilds the ladder
///
///   level 0 at t       : the filtered distribution itself
///   level j at t - j   : P(r_{t-j} = r | x_{1:t})
///                        = P(r_{t-j+1} = r + 1 | x_{1:t})
///                          + P(r_{t-j} = r | x_{1:t-j}) * P(r_{t-j+1} = 0 | x_{1:t})
///
/// where the first and last factors come from level j - 1. Level j depends on
/// the newest data, so the whole ladder is recomputed per step: O(lag * t).
///
/// Run lengths missing from a (pruned) distribution count as probability zero.
/// Every level is renormalised.
class LexoSmoother {
public:
    explicit LexoSmoother(std::size_t lag);

    // Feeds the filtered posterior at the next time index. Returns the level
    // `lag` result once lag + 1 filtered distributions are buffered, nullptr
    // during warm-up. The pointer stays valid until the next call.
    const SmoothedEmission* smooth_step(const RunLengthDistribution& newest_filtered);

    std::size_t lag() const noexcept { return lag_; }

    // Number of ladder levels computed by the last step beyond level 0:
    // min(lag, t - 1).
    std::size_t depth() const noexcept { return depth_; }

    // Level j of the last ladder: P(r_{t-j} | x_{1:t}), j <= depth().
    const RunLengthDistribution& level(std::size_t j) const;

    // Filtered distribution at t - j, j <= depth().
    const RunLengthDistribution& filtered(std::size_t age) const { return filtered_.back(age); }

    std::size_t newest_time() const noexcept { return filtered_.empty() ? 0 : filtered_.back(0).time_index; }

private:
    void build_level(std::size_t j);

    std::size_t lag_;
    std::size_t depth_ = 0;
    RingBuffer<RunLengthDistribution> filtered_;
    std::vector<RunLengthDistribution> ladder_; // ladder_[0] unused; level 0 lives in the ring
    SmoothedEmission emission_;
};

// Builds one ladder level. `filtered` is the filtered posterior at time s,
// `upper` the previous level at s + 1; `out` receives P(r_s | x_{1:t}) on
// the support of `filtered`. Throws SequencingError on misaligned times.
void ladder_level(const RunLengthDistribution& filtered, const RunLengthDistribution& upper,
                  RunLengthDistribution& out);

struct MapPoint {
    std::size_t time;
    std::size_t run_length;

    friend bool operator==(const MapPoint&, const MapPoint&) = default;
};

struct DeclaredChangepoint {
    std::size_t time;     // emission time at which the reset is observed
    std::size_t location; // first time index of the new regime, time - MAP(time)
};

std::vector<MapPoint> map_trace(std::span<const SmoothedEmission> emissions);

// Declares a changepoint at time s whenever MAP(s) < MAP(s-1) - gap.
std::vector<DeclaredChangepoint> declare_changepoints(std::span<const MapPoint> trace, std::size_t gap = 1);

} // namespace lexo
