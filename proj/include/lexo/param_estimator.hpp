#pragma once

#include "lexo/conjugate_model.hpp"
#include "lexo/ring_buffer.hpp"
#include "lexo/run_length.hpp"
#include "lexo/smoother.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lexo {

struct RunMoments {
    double m1 = 0.0; // E[eta | r]
    double m2 = 0.0; // E[eta^2 | r]
};

// Per-run-length moments at one time, aligned index-for-index with the
// support of the run-length distribution of that time.
struct MomentTable {
    std::size_t time_index = 0;
    std::vector<RunMoments> moments;
};

struct ParameterEmission {
    std::size_t emit_time = 0;
    double posterior_mean = 0.0;
    double posterior_variance = 0.0;
    // Weight alpha given to the regime-ends-here component, per run length of
    // the emitted level. Empty for lag 0.
    std::vector<double> alpha;
};

// Conjugate posterior moments for each run's statistics.
MomentTable level0_moments(const ConjugateModel& model, std::span<const SufficientStats> stats,
                           std::size_t time_index);
void level0_moments(const ConjugateModel& model, std::span<const SufficientStats> stats, std::size_t time_index,
                    MomentTable& out);

// One step of the moment ladder at time s. For every run length r in the
// support of `filtered` (time s):
//
//   alpha_1 = P(r_s = r | x_{1:s}) * P(r_{s+1} = 0 | x_{1:t})
//   alpha_2 = P(r_{s+1} = r + 1 | x_{1:t})
//   alpha   = alpha_1 / (alpha_1 + alpha_2)       (0 when both vanish)
//   E[eta^K | r] = alpha * level0_K(r) + (1 - alpha) * upper_K(r + 1)
//
// `upper` / `upper_moments` are the previous level at s + 1. Throws
// SequencingError when the four inputs are not time-aligned.
void ladder_moments_level(const RunLengthDistribution& filtered, const MomentTable& level0,
                          const RunLengthDistribution& upper, const MomentTable& upper_moments,
                          MomentTable& out, std::vector<double>* alpha = nullptr);

// Mixes per-run moments under a run-length distribution. Variance is clamped
// at zero.
ParameterEmission posterior_moments(const MomentTable& moments, const RunLengthDistribution& dist);

// Squared bias plus posterior variance.
double posterior_mse(const ParameterEmission& emission, double truth);

/// Runs the moment ladder alongside a LexoSmoother.
///
/// Buffers the level-0 tables for the last lag + 1 times and, after the
/// smoother has built its ladder, recomputes the moment tables for every
/// available level.
class ParameterLadder {
public:
    explicit ParameterLadder(std::size_t lag);

    // Buffers the level-0 moments of the newest time.
    void push_level0(MomentTable table);
    MomentTable& push_level0_slot() { return level0_.push_slot(); }

    // Rebuilds moment levels 1..smoother.depth() from the smoother's ladder.
    void update(const LexoSmoother& smoother);

    std::size_t depth() const noexcept { return depth_; }
    const MomentTable& level(std::size_t j) const;
    std::span<const double> alphas(std::size_t j) const;

    // Posterior moments of eta_{t-j} given x_{1:t}, j <= depth().
    ParameterEmission emission(const LexoSmoother& smoother, std::size_t j) const;

private:
    std::size_t lag_;
    std::size_t depth_ = 0;
    RingBuffer<MomentTable> level0_;
    std::vector<MomentTable> levels_;
    std::vector<std::vector<double>> alphas_;
};

} // namespace lexo
