// Command-line front end: detect, simulate, oracle.
//
// Every flag can also be set through an environment variable named
// LEXO_<FLAG> (upper case, dashes as underscores), e.g. LEXO_HAZARD=0.004.

#include "lexo/commands.hpp"
#include "lexo/error.hpp"
#include "lexo/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

std::string env_name(const std::string& flag) {
    std::string out = "LEXO_";
    for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

template <class T>
CLI::Option* add(CLI::App* app, const std::string& flag, T& target, const std::string& help) {
    return app->add_option("--" + flag, target, help)->envname(env_name(flag));
}

struct ModelFlags {
    std::string family = "poisson";
    lexo::ModelSpec spec;

    void attach(CLI::App* app) {
        add(app, "model", family, "gaussian-mean | gaussian-precision | poisson")
            ->check(CLI::IsMember({"gaussian-mean", "gaussian-precision", "poisson"}));
        add(app, "prior-chi", spec.prior_chi, "natural prior statistic chi");
        add(app, "prior-nu", spec.prior_nu, "natural prior pseudo-count nu");
        add(app, "shape", spec.shape, "gamma prior shape (precision / poisson models)");
        add(app, "rate", spec.rate, "gamma prior rate (precision / poisson models)");
        add(app, "prior-mean", spec.prior_mean, "normal prior mean (mean model)");
        add(app, "prior-precision", spec.prior_precision, "normal prior precision (mean model)");
        add(app, "known-precision", spec.known_precision, "observation precision (mean model, default 1)");
        add(app, "known-mean", spec.known_mean, "observation mean (precision model, default 0)");
    }

    lexo::ConjugateModel build() {
        spec.family = lexo::parse_family(family);
        return spec.build();
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lagged exact online Bayesian changepoint detection"};
    app.require_subcommand(1);

    // detect
    auto* detect = app.add_subcommand("detect", "run the lagged detector over a stream");
    ModelFlags detect_model;
    detect_model.attach(detect);
    lexo::RunConfig run;
    std::optional<std::string> out_dir;
    add(detect, "hazard", run.hazard, "changepoint hazard 1/lambda_gap")->check(CLI::Range(0.0, 1.0));
    add(detect, "lag", run.lag, "smoothing lag");
    add(detect, "prune", run.prune_threshold, "pruning threshold, 0 disables")->check(CLI::Range(0.0, 1.0));
    add(detect, "input", run.input, "CSV input path, - for stdin");
    add(detect, "column", run.column, "1-based value column (default: last)");
    add(detect, "out", out_dir, "output directory");
    add(detect, "gap", run.gap, "MAP drop needed to declare a changepoint");
    detect->add_flag("--returns", run.returns, "convert closing prices to returns")->envname("LEXO_RETURNS");
    detect->add_flag("--emit-dist", run.emit_dist, "write sparse run-length distributions")
        ->envname("LEXO_EMIT_DIST");
    detect->add_flag("--emit-warmup", run.emit_warmup, "write filtered results during warm-up")
        ->envname("LEXO_EMIT_WARMUP");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo study of the three synthetic processes");
    lexo::SimConfig sim;
    std::string process = "mean-shift";
    std::string lags = "1,2,3,4,5,10,15,30";
    std::optional<std::string> sim_out;
    add(simulate, "process", process, "mean-shift | precision-shift | poisson")
        ->check(CLI::IsMember({"mean-shift", "precision-shift", "poisson"}));
    add(simulate, "reps", sim.replications, "replications");
    add(simulate, "lags", lags, "comma separated lags");
    add(simulate, "hazard", sim.hazard, "changepoint hazard")->check(CLI::Range(0.0, 1.0));
    add(simulate, "prune", sim.prune_threshold, "pruning threshold, 0 disables");
    add(simulate, "regimes", sim.regimes, "number of regimes");
    add(simulate, "regime-length", sim.regime_length, "steps per regime");
    add(simulate, "seed", sim.seed, "base seed");
    add(simulate, "threads", sim.threads, "worker threads, 0 = all cores");
    add(simulate, "out", sim_out, "output directory");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact posteriors by enumerating segmentations");
    ModelFlags oracle_model;
    oracle_model.attach(oracle);
    lexo::OracleConfig ocfg;
    std::string data;
    std::optional<std::string> oracle_out;
    add(oracle, "data", data, "comma separated observations (at most 12)")->required();
    add(oracle, "hazard", ocfg.hazard, "changepoint hazard")->check(CLI::Range(0.0, 1.0));
    add(oracle, "lag", ocfg.lag, "only emit s = t - lag");
    add(oracle, "out", oracle_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect->parsed()) {
            run.model = detect_model.build();
            if (out_dir) run.out_dir = *out_dir;
            if (run.input == "-") {
                lexo::run_detect(run, std::cin, std::cout);
            } else {
                std::ifstream in(run.input);
                if (!in) throw std::runtime_error("cannot open " + run.input);
                lexo::run_detect(run, in, std::cout);
            }
        } else if (simulate->parsed()) {
            sim.process = lexo::parse_process(process);
            sim.lags.clear();
            for (double l : lexo::parse_number_list(lags)) {
                if (l < 0 || l != static_cast<double>(static_cast<std::size_t>(l))) {
                    throw std::invalid_argument("lags must be nonnegative integers");
                }
                sim.lags.push_back(static_cast<std::size_t>(l));
            }
            std::optional<std::filesystem::path> dir;
            if (sim_out) dir = *sim_out;
            lexo::run_simulate(sim, dir, std::cout);
        } else if (oracle->parsed()) {
            ocfg.model = oracle_model.build();
            ocfg.data = lexo::parse_number_list(data);
            if (oracle_out) ocfg.out_dir = *oracle_out;
            lexo::run_oracle(ocfg, std::cout);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
