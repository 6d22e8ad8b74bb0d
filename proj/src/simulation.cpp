#include "lexo/simulation.hpp"

#include "lexo/detector.hpp"
#include "lexo/hazard.hpp"

#include <json.hpp>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace lexo {

namespace {

constexpr const char* kRngName = "mt19937_64/seed_seq(seed_lo,seed_hi,process,replication)";

std::mt19937_64 substream(std::uint64_t seed, SimProcess process, std::size_t replication) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(process), static_cast<std::uint32_t>(replication),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(replication) >> 32)};
    return std::mt19937_64(seq);
}

double median(std::vector<double>& values) {
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

// Per-replication results, [lag index][time - 1].
struct ReplicationResult {
    std::vector<std::vector<double>> map;
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> mse;
};

ReplicationResult run_replication(const SimConfig& config, const std::vector<std::size_t>& lags,
                                  const ConjugateModel& model, std::size_t replication) {
    const std::size_t horizon = config.horizon();
    const auto series = generate(config, replication);

    ReplicationResult out;
    out.map.assign(lags.size(), std::vector<double>(horizon, 0.0));
    out.mean.assign(lags.size(), std::vector<double>(horizon, 0.0));
    out.mse.assign(lags.size(), std::vector<double>(horizon, 0.0));

    Detector detector(model, HazardSpec::from_hazard(config.hazard),
                      DetectorOptions{config.max_lag(), config.prune_threshold, true});
    for (double x : series.observations) {
        detector.observe(x);
        const std::size_t t = detector.time_index();
        for (std::size_t li = 0; li < lags.size(); ++li) {
            const std::size_t lag = lags[li];
            if (lag > detector.depth()) continue;
            const std::size_t s = t - lag;
            if (s > horizon) continue;
            const auto& dist = detector.smoothed(lag);
            const auto params = posterior_moments(detector.moment_ladder().level(lag), dist);
            out.map[li][s - 1] = static_cast<double>(dist.map_run_length());
            out.mean[li][s - 1] = params.posterior_mean;
            out.mse[li][s - 1] = posterior_mse(params, series.truth.parameter[s - 1]);
        }
    }
    return out;
}

} // namespace

std::string_view to_string(SimProcess process) noexcept {
    switch (process) {
    case SimProcess::MeanShift: return "mean-shift";
    case SimProcess::PrecisionShift: return "precision-shift";
    case SimProcess::Poisson: return "poisson";
    }
    return "unknown";
}

SimProcess parse_process(std::string_view name) {
    if (name == "mean-shift") return SimProcess::MeanShift;
    if (name == "precision-shift") return SimProcess::PrecisionShift;
    if (name == "poisson") return SimProcess::Poisson;
    throw std::invalid_argument("unknown simulation process '" + std::string(name) + "'");
}

ConjugateModel default_model(SimProcess process) {
    switch (process) {
    case SimProcess::MeanShift: return ConjugateModel::gaussian_mean_shift();
    case SimProcess::PrecisionShift: return ConjugateModel::gaussian_precision_shift();
    case SimProcess::Poisson: return ConjugateModel::poisson_gamma();
    }
    throw std::invalid_argument("unknown simulation process");
}

double regime_parameter(SimProcess process, std::size_t regime) {
    if (regime == 0) throw std::invalid_argument("regimes are numbered from 1");
    const double k = static_cast<double>(regime - 1);
    switch (process) {
    case SimProcess::MeanShift: return k;
    case SimProcess::PrecisionShift: {
        const double xi = 16.0 * std::pow(0.25, k);
        return xi * xi;
    }
    case SimProcess::Poisson: return 1.0 + 4.0 * k;
    }
    throw std::invalid_argument("unknown simulation process");
}

std::size_t SimConfig::max_lag() const noexcept {
    return lags.empty() ? 0 : *std::max_element(lags.begin(), lags.end());
}

void SimConfig::validate() const {
    if (regimes == 0) throw std::invalid_argument("at least one regime is required");
    if (regime_length == 0) throw std::invalid_argument("regime length must be positive");
    if (replications == 0) throw std::invalid_argument("at least one replication is required");
    if (!(hazard > 0.0 && hazard < 1.0)) throw std::invalid_argument("hazard must lie in (0, 1)");
    if (!(prune_threshold >= 0.0 && prune_threshold < 1.0)) {
        throw std::invalid_argument("prune threshold must lie in [0, 1)");
    }
    if (model && default_model(process).family() != model->family()) {
        throw std::invalid_argument("model family does not match the simulated process");
    }
}

SimulatedSeries generate(const SimConfig& config, std::size_t replication) {
    const std::size_t n = config.stream_length();
    SimulatedSeries series;
    series.observations.reserve(n);
    series.truth.regime.reserve(n);
    series.truth.parameter.reserve(n);
    for (std::size_t k = 1; k < config.regimes; ++k) series.truth.changepoints.push_back(k * config.regime_length + 1);

    auto rng = substream(config.seed, config.process, replication);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t regime = std::min(i / config.regime_length + 1, config.regimes);
        const double eta = regime_parameter(config.process, regime);
        double x = 0.0;
        switch (config.process) {
        case SimProcess::MeanShift: x = boost::random::normal_distribution<double>(eta, 1.0)(rng); break;
        case SimProcess::PrecisionShift:
            x = boost::random::normal_distribution<double>(0.0, 1.0 / std::sqrt(eta))(rng);
            break;
        case SimProcess::Poisson:
            x = static_cast<double>(boost::random::poisson_distribution<int, double>(eta)(rng));
            break;
        }
        series.observations.push_back(x);
        series.truth.regime.push_back(regime);
        series.truth.parameter.push_back(eta);
    }
    return series;
}

const ReportRow& ExperimentReport::row(std::size_t lag, std::size_t time) const {
    const auto it = std::find(lags.begin(), lags.end(), lag);
    const std::size_t horizon = config.horizon();
    if (it == lags.end() || time == 0 || time > horizon) {
        throw std::out_of_range("no report row for lag " + std::to_string(lag) + " at time " + std::to_string(time));
    }
    return rows[static_cast<std::size_t>(it - lags.begin()) * horizon + (time - 1)];
}

std::vector<double> ExperimentReport::median_map_trace(std::size_t lag) const {
    std::vector<double> trace;
    trace.reserve(config.horizon());
    for (std::size_t t = 1; t <= config.horizon(); ++t) trace.push_back(row(lag, t).median_map);
    return trace;
}

ExperimentReport run_experiment(const SimConfig& config) {
    config.validate();
    const ConjugateModel model = config.model.value_or(default_model(config.process));

    ExperimentReport report;
    report.config = config;
    report.lags = config.lags;
    report.lags.push_back(0);
    std::sort(report.lags.begin(), report.lags.end());
    report.lags.erase(std::unique(report.lags.begin(), report.lags.end()), report.lags.end());

    // Replications land in fixed slots; the reduction below walks them in
    // index order, so the result does not depend on scheduling.
    std::vector<ReplicationResult> results(config.replications);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t rep = next++; rep < config.replications; rep = next++) {
            results[rep] = run_replication(config, report.lags, model, rep);
        }
    };
    std::size_t threads = config.threads ? config.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = std::min(threads, config.replications);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    const std::size_t horizon = config.horizon();
    const double reps = static_cast<double>(config.replications);
    std::vector<double> scratch(config.replications);
    std::vector<double> exo_mse(horizon, 0.0);
    report.rows.reserve(report.lags.size() * horizon);
    for (std::size_t li = 0; li < report.lags.size(); ++li) {
        for (std::size_t s = 1; s <= horizon; ++s) {
            double mean_sum = 0.0;
            double mse_sum = 0.0;
            for (std::size_t rep = 0; rep < config.replications; ++rep) {
                scratch[rep] = results[rep].map[li][s - 1];
                mean_sum += results[rep].mean[li][s - 1];
                mse_sum += results[rep].mse[li][s - 1];
            }
            const double avg_mse = mse_sum / reps;
            if (report.lags[li] == 0) exo_mse[s - 1] = avg_mse;
            report.rows.push_back({config.process, report.lags[li], s, median(scratch), mean_sum / reps, avg_mse,
                                   exo_mse[s - 1] / avg_mse});
        }
    }
    return report;
}

RatioTable mse_ratio_table(const ExperimentReport& report, const std::vector<std::size_t>& times,
                           const std::vector<std::size_t>& lags) {
    RatioTable table{times, lags, {}};
    for (std::size_t t : times) {
        auto& line = table.ratios.emplace_back();
        for (std::size_t lag : lags) line.push_back(report.row(lag, t).mse_ratio);
    }
    return table;
}

void write_report_csv(const ExperimentReport& report, std::ostream& out, bool header) {
    if (header) out << "process,lag,time,median_map,avg_post_mean,avg_mse,mse_ratio\n";
    out << std::setprecision(17);
    for (const auto& r : report.rows) {
        out << to_string(r.process) << ',' << r.lag << ',' << r.time << ',' << r.median_map << ','
            << r.avg_post_mean << ',' << r.avg_mse << ',' << r.mse_ratio << '\n';
    }
}

void write_ratio_table_csv(const ExperimentReport& report, const RatioTable& table, std::ostream& out) {
    out << "process,time";
    for (std::size_t lag : table.lags) out << ",lag_" << lag;
    out << '\n' << std::setprecision(6);
    for (std::size_t i = 0; i < table.times.size(); ++i) {
        out << to_string(report.config.process) << ',' << table.times[i];
        for (double v : table.ratios[i]) out << ',' << v;
        out << '\n';
    }
}

void write_config_json(const SimConfig& config, std::ostream& out) {
    const ConjugateModel model = config.model.value_or(default_model(config.process));
    nlohmann::ordered_json j;
    j["command"] = "simulate";
    j["process"] = to_string(config.process);
    j["regimes"] = config.regimes;
    j["regime_length"] = config.regime_length;
    j["horizon"] = config.horizon();
    j["stream_length"] = config.stream_length();
    j["replications"] = config.replications;
    j["lags"] = config.lags;
    j["hazard"] = config.hazard;
    j["prune"] = config.prune_threshold;
    j["seed"] = config.seed;
    j["rng"] = kRngName;
    j["model"] = to_string(model.family());
    j["prior_chi"] = model.prior().chi;
    j["prior_nu"] = model.prior().nu;
    j["fixed_parameter"] = model.fixed_parameter();
    out << j.dump(2) << '\n';
}

std::optional<std::size_t> map_reset_time(const std::vector<double>& median_map, std::size_t changepoint,
                                          std::size_t window) {
    for (std::size_t s = changepoint; s <= changepoint + window && s <= median_map.size(); ++s) {
        if (median_map[s - 1] <= static_cast<double>(s - changepoint)) return s;
    }
    return std::nullopt;
}

} // namespace lexo
