#pragma once

#include "lexo/conjugate_model.hpp"
#include "lexo/simulation.hpp"
#include "lexo/smoother.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lexo {

// Model family plus whichever hyperparameters were given on the command
// line. Natural-form (chi/nu) and family-specific settings are exclusive.
struct ModelSpec {
    ModelFamily family = ModelFamily::PoissonGamma;
    std::optional<double> prior_chi;
    std::optional<double> prior_nu;
    std::optional<double> shape;
    std::optional<double> rate;
    std::optional<double> prior_mean;
    std::optional<double> prior_precision;
    std::optional<double> known_precision;
    std::optional<double> known_mean;

    // Throws std::invalid_argument on contradictory settings.
    ConjugateModel build() const;
};

nlohmann::ordered_json model_to_json(const ConjugateModel& model);

struct RunConfig {
    ConjugateModel model = ConjugateModel::poisson_gamma();
    double hazard = 1.0 / 250.0;
    std::size_t lag = 0;
    double prune_threshold = 1e-5;
    std::string input = "-"; // "-" reads standard input
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::size_t> column;
    bool returns = false;
    bool emit_dist = false;
    bool emit_warmup = false;
    std::size_t gap = 1;

    void validate() const;
};

struct EmissionRow {
    std::size_t time = 0;
    std::size_t map_run_length = 0;
    double p_changepoint = 0.0;
    double post_mean = 0.0;
    double post_var = 0.0;
};

struct DetectSummary {
    std::size_t records = 0;
    std::size_t emissions = 0;
    std::vector<DeclaredChangepoint> changepoints;
    std::optional<EmissionRow> last;
};

// Streams records through the detector. With an output directory it writes
// emissions.csv, changepoints.csv, config.json and, on request,
// distribution.csv and warmup.csv; otherwise emissions go to `out`.
DetectSummary run_detect(const RunConfig& config, std::istream& in, std::ostream& out);

// In-memory form used by the analysis recipes and tests: every lagged
// emission for an observation sequence.
std::vector<EmissionRow> detect_series(const RunConfig& config, std::span<const double> observations);

std::vector<DeclaredChangepoint> changepoints_from(std::span<const EmissionRow> rows, std::size_t gap);

struct OracleConfig {
    ConjugateModel model = ConjugateModel::poisson_gamma();
    double hazard = 0.02;
    std::vector<double> data;
    std::optional<std::size_t> lag; // only query_time = t - lag when set
    std::optional<std::filesystem::path> out_dir;
};

// Writes posterior rows condition_time,query_time,run_length,log_prob,prob,m1,m2
// (oracle.csv) and condition_time,query_time,log_evidence,post_mean,post_var
// (summary.csv).
void run_oracle(const OracleConfig& config, std::ostream& out);

// Writes report.csv, table.csv and config.json to the output directory, or
// the report to `out`.
ExperimentReport run_simulate(const SimConfig& config, const std::optional<std::filesystem::path>& out_dir,
                              std::ostream& out);

} // namespace lexo
