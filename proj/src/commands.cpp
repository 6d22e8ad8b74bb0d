#include "lexo/commands.hpp"

#include "lexo/detector.hpp"
#include "lexo/error.hpp"
#include "lexo/io.hpp"
#include "lexo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace lexo {

namespace {

std::ofstream open_output(const std::filesystem::path& dir, const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
}

void write_emission(std::ostream& out, const EmissionRow& row) {
    out << row.time << ',' << row.map_run_length << ',' << format_double(row.p_changepoint) << ','
        << format_double(row.post_mean) << ',' << format_double(row.post_var) << '\n';
}

constexpr const char* kEmissionHeader = "time,map_run_length,p_changepoint,post_mean,post_var\n";

EmissionRow make_row(const Detector& detector, std::size_t level) {
    const auto& dist = detector.smoothed(level);
    const auto params = posterior_moments(detector.moment_ladder().level(level), dist);
    return {dist.time_index, dist.map_run_length(), std::exp(dist.log_prob_zero()), params.posterior_mean,
            params.posterior_variance};
}

void write_distribution(std::ostream& out, const RunLengthDistribution& dist) {
    for (std::size_t i = 0; i < dist.size(); ++i) {
        out << dist.time_index << ',' << dist.run_lengths[i] << ',' << format_double(std::exp(dist.log_probs[i]))
            << '\n';
    }
}

// Online form of declare_changepoints.
class ChangepointTracker {
public:
    explicit ChangepointTracker(std::size_t gap) : gap_(gap) {}

    std::optional<DeclaredChangepoint> push(std::size_t time, std::size_t map) {
        std::optional<DeclaredChangepoint> out;
        if (seen_ && map + gap_ < previous_) out = DeclaredChangepoint{time, time - map};
        previous_ = map;
        seen_ = true;
        return out;
    }

private:
    std::size_t gap_;
    std::size_t previous_ = 0;
    bool seen_ = false;
};

} // namespace

ConjugateModel ModelSpec::build() const {
    const bool natural = prior_chi || prior_nu;
    const bool gamma = shape || rate;
    const bool normal = prior_mean || prior_precision;
    if (natural && (gamma || normal)) {
        throw std::invalid_argument("--prior-chi/--prior-nu cannot be combined with family-specific priors");
    }
    if (natural && !(prior_chi && prior_nu)) throw std::invalid_argument("--prior-chi and --prior-nu go together");

    switch (family) {
    case ModelFamily::GaussianMeanShift: {
        if (gamma) throw std::invalid_argument("--shape/--rate apply to gamma-prior models only");
        if (known_mean) throw std::invalid_argument("--known-mean applies to the precision model only");
        const double tau = known_precision.value_or(1.0);
        if (natural) return ConjugateModel::from_natural(family, {*prior_chi, *prior_nu}, tau);
        return ConjugateModel::gaussian_mean_shift(prior_mean.value_or(0.0), prior_precision.value_or(1e-4), tau);
    }
    case ModelFamily::GaussianPrecisionShift: {
        if (normal) throw std::invalid_argument("--prior-mean/--prior-precision apply to the mean model only");
        if (known_precision) throw std::invalid_argument("--known-precision applies to the mean model only");
        const double m = known_mean.value_or(0.0);
        if (natural) return ConjugateModel::from_natural(family, {*prior_chi, *prior_nu}, m);
        return ConjugateModel::gaussian_precision_shift(shape.value_or(1.0), rate.value_or(1e-4), m);
    }
    case ModelFamily::PoissonGamma: {
        if (normal) throw std::invalid_argument("--prior-mean/--prior-precision apply to the mean model only");
        if (known_mean || known_precision) throw std::invalid_argument("the poisson model has no known parameter");
        if (natural) return ConjugateModel::from_natural(family, {*prior_chi, *prior_nu}, 0.0);
        return ConjugateModel::poisson_gamma(shape.value_or(1.0), rate.value_or(1e-4));
    }
    }
    throw std::invalid_argument("unknown model family");
}

nlohmann::ordered_json model_to_json(const ConjugateModel& model) {
    nlohmann::ordered_json j;
    j["family"] = to_string(model.family());
    j["prior_chi"] = model.prior().chi;
    j["prior_nu"] = model.prior().nu;
    switch (model.family()) {
    case ModelFamily::GaussianMeanShift: {
        const auto p = model.normal_params(model.prior_stats());
        j["prior_mean"] = p.mean;
        j["prior_precision"] = p.precision;
        j["known_precision"] = model.fixed_parameter();
        break;
    }
    case ModelFamily::GaussianPrecisionShift:
    case ModelFamily::PoissonGamma: {
        const auto g = model.gamma_params(model.prior_stats());
        j["shape"] = g.shape;
        j["rate"] = g.rate;
        if (model.family() == ModelFamily::GaussianPrecisionShift) j["known_mean"] = model.fixed_parameter();
        break;
    }
    }
    return j;
}

void RunConfig::validate() const {
    if (!(hazard > 0.0 && hazard < 1.0)) throw std::invalid_argument("hazard must lie in (0, 1)");
    if (!(prune_threshold >= 0.0 && prune_threshold < 1.0)) {
        throw std::invalid_argument("prune threshold must lie in [0, 1)");
    }
    if ((emit_dist || emit_warmup) && !out_dir) {
        throw std::invalid_argument("--emit-dist and --emit-warmup need --out");
    }
    if (returns && model.family() == ModelFamily::PoissonGamma) {
        throw std::invalid_argument("returns are real-valued; use a gaussian model");
    }
}

DetectSummary run_detect(const RunConfig& config, std::istream& in, std::ostream& out) {
    config.validate();

    std::ofstream emissions_file, changepoints_file, dist_file, warmup_file;
    std::ostream* emissions = &out;
    if (config.out_dir) {
        std::filesystem::create_directories(*config.out_dir);
        {
            nlohmann::ordered_json j;
            j["command"] = "detect";
            j["model"] = model_to_json(config.model);
            j["hazard"] = config.hazard;
            j["lag"] = config.lag;
            j["prune"] = config.prune_threshold;
            j["input"] = config.input;
            j["column"] = config.column ? nlohmann::ordered_json(*config.column) : nlohmann::ordered_json("last");
            j["returns"] = config.returns;
            j["emit_dist"] = config.emit_dist;
            j["emit_warmup"] = config.emit_warmup;
            j["gap"] = config.gap;
            auto cfg = open_output(*config.out_dir, "config.json");
            cfg << j.dump(2) << '\n';
        }
        emissions_file = open_output(*config.out_dir, "emissions.csv");
        emissions = &emissions_file;
        changepoints_file = open_output(*config.out_dir, "changepoints.csv");
        changepoints_file << "time,location\n";
        if (config.emit_dist) {
            dist_file = open_output(*config.out_dir, "distribution.csv");
            dist_file << "time,r,prob\n";
        }
        if (config.emit_warmup) {
            warmup_file = open_output(*config.out_dir, "warmup.csv");
            warmup_file << kEmissionHeader;
        }
    }
    *emissions << kEmissionHeader;

    Detector detector(config.model, HazardSpec::from_hazard(config.hazard),
                      DetectorOptions{config.lag, config.prune_threshold, true});
    RecordReader reader(in, config.column);
    ReturnsStream returns;
    ChangepointTracker tracker(config.gap);
    DetectSummary summary;

    while (auto record = reader.next()) {
        double x = record->value;
        if (config.returns) {
            std::optional<double> r;
            try {
                r = returns.push(x);
            } catch (const DataError& e) {
                throw DataError(e.what(), reader.line_number());
            }
            if (!r) continue;
            x = *r;
        }
        try {
            config.model.validate(x);
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (at " + std::to_string(reader.line_number()) + ")");
        }
        ++summary.records;

        const auto* emission = detector.observe(x);
        if (!emission) {
            if (config.emit_warmup) write_emission(warmup_file, make_row(detector, 0));
            continue;
        }
        const EmissionRow row = make_row(detector, config.lag);
        write_emission(*emissions, row);
        if (config.emit_dist) write_distribution(dist_file, emission->distribution);
        if (auto cp = tracker.push(row.time, row.map_run_length)) {
            summary.changepoints.push_back(*cp);
            if (config.out_dir) changepoints_file << cp->time << ',' << cp->location << '\n';
        }
        ++summary.emissions;
        summary.last = row;
    }
    if (config.returns && summary.records == 0) throw DataError("returns need at least two prices", 1);
    return summary;
}

std::vector<EmissionRow> detect_series(const RunConfig& config, std::span<const double> observations) {
    config.validate();
    Detector detector(config.model, HazardSpec::from_hazard(config.hazard),
                      DetectorOptions{config.lag, config.prune_threshold, true});
    std::vector<EmissionRow> rows;
    rows.reserve(observations.size());
    for (double x : observations) {
        if (detector.observe(x)) rows.push_back(make_row(detector, config.lag));
    }
    return rows;
}

std::vector<DeclaredChangepoint> changepoints_from(std::span<const EmissionRow> rows, std::size_t gap) {
    std::vector<MapPoint> trace;
    trace.reserve(rows.size());
    for (const auto& r : rows) trace.push_back({r.time, r.map_run_length});
    return declare_changepoints(trace, gap);
}

void run_oracle(const OracleConfig& config, std::ostream& out) {
    if (config.data.empty()) throw std::invalid_argument("oracle needs at least one observation");
    if (config.data.size() > kOracleMaxLength) {
        throw OracleLimitError("enumeration is limited to " + std::to_string(kOracleMaxLength) + " observations");
    }
    const auto hazard = HazardSpec::from_hazard(config.hazard);

    std::ofstream posterior_file, summary_file;
    std::ostream* posterior = &out;
    std::ostream* summary = nullptr;
    if (config.out_dir) {
        std::filesystem::create_directories(*config.out_dir);
        posterior_file = open_output(*config.out_dir, "oracle.csv");
        summary_file = open_output(*config.out_dir, "summary.csv");
        posterior = &posterior_file;
        summary = &summary_file;
        nlohmann::ordered_json j;
        j["command"] = "oracle";
        j["model"] = model_to_json(config.model);
        j["hazard"] = config.hazard;
        j["data"] = config.data;
        if (config.lag) j["lag"] = *config.lag;
        auto cfg = open_output(*config.out_dir, "config.json");
        cfg << j.dump(2) << '\n';
        *summary << "condition_time,query_time,log_evidence,post_mean,post_var\n";
    }
    *posterior << "condition_time,query_time,run_length,log_prob,prob,m1,m2\n";

    const std::size_t n = config.data.size();
    for (std::size_t t = 1; t <= n; ++t) {
        for (std::size_t s = 1; s <= t; ++s) {
            if (config.lag && s + *config.lag != t) continue;
            const auto res = enumerate_posterior(config.model, hazard, config.data, s, t);
            for (std::size_t r = 0; r < s; ++r) {
                *posterior << t << ',' << s << ',' << r << ',' << format_double(res.log_probs[r]) << ','
                           << format_double(std::exp(res.log_probs[r])) << ',' << format_double(res.moments[r].m1)
                           << ',' << format_double(res.moments[r].m2) << '\n';
            }
            if (summary) {
                *summary << t << ',' << s << ',' << format_double(res.log_evidence) << ','
                         << format_double(res.posterior_mean) << ',' << format_double(res.posterior_variance)
                         << '\n';
            }
        }
    }
}

ExperimentReport run_simulate(const SimConfig& config, const std::optional<std::filesystem::path>& out_dir,
                              std::ostream& out) {
    auto report = run_experiment(config);

    std::vector<std::size_t> times;
    for (std::size_t t : kTableTimes) {
        if (t <= config.horizon()) times.push_back(t);
    }
    std::vector<std::size_t> lags;
    for (std::size_t l : report.lags) {
        if (l > 0) lags.push_back(l);
    }
    const auto table = mse_ratio_table(report, times, lags);

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        auto report_file = open_output(*out_dir, "report.csv");
        write_report_csv(report, report_file);
        auto table_file = open_output(*out_dir, "table.csv");
        write_ratio_table_csv(report, table, table_file);
        auto cfg = open_output(*out_dir, "config.json");
        write_config_json(config, cfg);
    } else {
        write_ratio_table_csv(report, table, out);
    }
    return report;
}

} // namespace lexo
