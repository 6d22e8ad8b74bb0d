#pragma once

#include "lexo/conjugate_model.hpp"
#include "lexo/hazard.hpp"
#include "lexo/param_estimator.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lexo {

inline constexpr std::size_t kOracleMaxLength = 12;

// Exact answer for P(r_s | x_{1:t}) and the regime-parameter moments at s.
struct OracleResult {
    std::size_t query_time = 0;     // s
    std::size_t condition_time = 0; // t
    std::vector<double> log_probs;  // indexed by run length 0..s-1
    std::vector<RunMoments> moments; // E[eta_s^K | r_s = r, x_{1:t}]
    double log_evidence = 0.0;       // log P(x_{1:t})
    double posterior_mean = 0.0;
    double posterior_variance = 0.0;
};

/// Brute-force reference by enumerating every segmentation of x_{1:t}.
///
/// Each of the 2^{t-1} changepoint indicator vectors is weighted by its
/// geometric-gap prior times the closed-form marginal likelihood of each
/// segment. The parameter moments for a segmentation are those of the
/// conjugate posterior of the segment containing s, given all of that
/// segment's observations up to t. None of the engine's recursions are used.
///
/// Throws OracleLimitError when the data exceed kOracleMaxLength points.
OracleResult enumerate_posterior(const ConjugateModel& model, const HazardSpec& hazard, std::span<const double> data,
                                 std::size_t query_time, std::size_t condition_time);

// Closed-form log marginal likelihood of one segment under the prior.
double segment_log_marginal(const ConjugateModel& model, std::span<const double> segment);

// Closed-form posterior moments of the regime parameter given one segment.
RunMoments segment_moments(const ConjugateModel& model, std::span<const double> segment);

} // namespace lexo
