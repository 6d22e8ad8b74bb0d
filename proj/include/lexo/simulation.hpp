#pragma once

#include "lexo/conjugate_model.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace lexo {

enum class SimProcess {
    MeanShift,      // N(mu_k, 1), mu_1 = 0, mu_k = mu_{k-1} + 1
    PrecisionShift, // N(0, 1/xi_k^2), xi_1 = 16, xi_k = xi_{k-1} / 4; reports xi_k^2
    Poisson,        // Poisson(lambda_k), lambda_1 = 1, lambda_k = lambda_{k-1} + 4
};

std::string_view to_string(SimProcess process) noexcept;
SimProcess parse_process(std::string_view name);

// Matching observation model with the default diffuse prior.
ConjugateModel default_model(SimProcess process);

// True regime parameter of regime k (1-based) on the reporting scale.
double regime_parameter(SimProcess process, std::size_t regime);

struct SimConfig {
    SimProcess process = SimProcess::MeanShift;
    std::size_t regimes = 6;
    std::size_t regime_length = 40;
    std::size_t replications = 200;
    std::vector<std::size_t> lags = {1, 2, 3, 4, 5, 10, 15, 30};
    double hazard = 1.0 / 50.0;
    double prune_threshold = 1e-5;
    std::uint64_t seed = 20190704;
    std::size_t threads = 0; // 0: hardware concurrency
    std::optional<ConjugateModel> model; // default_model(process) when unset

    // Reported times run 1..horizon(). The final regime is extended by the
    // largest lag so every reported time has all of its lagged emissions.
    std::size_t horizon() const noexcept { return regimes * regime_length; }
    std::size_t max_lag() const noexcept;
    std::size_t stream_length() const noexcept { return horizon() + max_lag(); }

    void validate() const;
};

struct GroundTruth {
    std::vector<std::size_t> regime;   // tau(t), 1-based, per time
    std::vector<double> parameter;     // eta_t on the reporting scale
    std::vector<std::size_t> changepoints; // first time index of regimes 2..K
};

struct SimulatedSeries {
    std::vector<double> observations;
    GroundTruth truth;
};

// Deterministic in (config.seed, config.process, replication).
SimulatedSeries generate(const SimConfig& config, std::size_t replication);

struct ReportRow {
    SimProcess process;
    std::size_t lag;
    std::size_t time;
    double median_map;
    double avg_post_mean;
    double avg_mse;
    double mse_ratio; // avg_mse at lag 0 over avg_mse at this lag
};

struct ExperimentReport {
    SimConfig config;
    std::vector<std::size_t> lags; // ascending, always contains 0
    std::vector<ReportRow> rows;   // ordered by lag, then time

    const ReportRow& row(std::size_t lag, std::size_t time) const;
    std::vector<double> median_map_trace(std::size_t lag) const; // index time - 1
};

ExperimentReport run_experiment(const SimConfig& config);

inline const std::vector<std::size_t> kTableTimes = {197, 200, 220};
inline const std::vector<std::size_t> kTableLags = {1, 2, 3, 4, 5, 10, 15, 30};

struct RatioTable {
    std::vector<std::size_t> times;
    std::vector<std::size_t> lags;
    std::vector<std::vector<double>> ratios; // [time][lag]
};

RatioTable mse_ratio_table(const ExperimentReport& report, const std::vector<std::size_t>& times = kTableTimes,
                           const std::vector<std::size_t>& lags = kTableLags);

// CSV: process,lag,time,median_map,avg_post_mean,avg_mse,mse_ratio
void write_report_csv(const ExperimentReport& report, std::ostream& out, bool header = true);
void write_ratio_table_csv(const ExperimentReport& report, const RatioTable& table, std::ostream& out);
void write_config_json(const SimConfig& config, std::ostream& out);

// First emission time s >= changepoint at which the trace places the
// changepoint no earlier than itself: trace[s-1] <= s - changepoint. Returns
// nullopt when no such time exists within `window` emissions.
std::optional<std::size_t> map_reset_time(const std::vector<double>& median_map, std::size_t changepoint,
                                          std::size_t window);

} // namespace lexo
