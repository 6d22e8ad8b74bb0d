#pragma once

#include <cstddef>
#include <vector>

namespace lexo {

// Sparse run-length posterior at one time index. Run lengths are stored in
// ascending order alongside their log-probabilities; anything absent has
// probability zero.
struct RunLengthDistribution {
    std::size_t time_index = 0;
    std::vector<std::size_t> run_lengths;
    std::vector<double> log_probs;

    std::size_t size() const noexcept { return run_lengths.size(); }
    bool empty() const noexcept { return run_lengths.empty(); }

    double log_prob(std::size_t run_length) const noexcept;
    double prob(std::size_t run_length) const noexcept;
    bool contains(std::size_t run_length) const noexcept;

    // log P(r = 0), or -inf when the slot is absent.
    double log_prob_zero() const noexcept;

    // Smallest run length among the maximisers. Requires a non-empty support.
    std::size_t map_run_length() const;

    double log_total_mass() const noexcept;
    double total_mass() const noexcept;

    // Shifts log_probs so that the total mass is one.
    void normalize();

    void clear() noexcept {
        run_lengths.clear();
        log_probs.clear();
    }
};

} // namespace lexo
