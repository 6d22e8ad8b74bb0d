// Acceptance suite: prints one PASS/FAIL/SKIP line per criterion and exits
// nonzero when any criterion fails.

#include "lexo/commands.hpp"
#include "lexo/detector.hpp"
#include "lexo/forward_filter.hpp"
#include "lexo/io.hpp"
#include "lexo/oracle.hpp"
#include "lexo/simulation.hpp"

#include "support/cases.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace lexo;
using Clock = std::chrono::steady_clock;

namespace {

enum class Verdict { Pass, Fail, Skip };

int g_failures = 0;

void report(int id, const std::string& name, Verdict v, const std::string& detail) {
    const char* tag = v == Verdict::Pass ? "PASS" : v == Verdict::Fail ? "FAIL" : "SKIP";
    if (v == Verdict::Fail) ++g_failures;
    std::printf("[%s] %d %s: %s\n", tag, id, name.c_str(), detail.c_str());
    std::fflush(stdout);
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

struct Battery {
    ModelFamily family;
    ConjugateModel model;
    HazardSpec hazard;
    std::vector<double> data;
};

// 50 random sequences per family, n <= 8, hazard in [0.01, 0.5].
std::vector<Battery> make_battery() {
    std::mt19937_64 rng(20190704);
    std::vector<Battery> out;
    for (auto family : lexo::testing::kFamilies) {
        for (int c = 0; c < 50; ++c) {
            const auto model = lexo::testing::random_model(family, rng);
            const double h = std::uniform_real_distribution<double>(0.01, 0.5)(rng);
            const std::size_t n = 1 + rng() % 8;
            out.push_back({family, model, HazardSpec::from_hazard(h), lexo::testing::random_data(family, n, rng)});
        }
    }
    return out;
}

void oracle_exactness(const std::vector<Battery>& battery) {
    const auto start = Clock::now();
    double worst = 0.0;
    std::size_t entries = 0;
    bool support_ok = true;
    for (const auto& b : battery) {
        const std::size_t n = b.data.size();
        Detector det(b.model, b.hazard, {.lag = n - 1, .prune_threshold = 0.0, .track_moments = false});
        for (std::size_t t = 1; t <= n; ++t) {
            det.observe(b.data[t - 1]);
            for (std::size_t j = 0; j <= det.depth(); ++j) {
                const auto& level = det.smoothed(j);
                const auto ref = enumerate_posterior(b.model, b.hazard, b.data, t - j, t);
                if (level.size() != ref.log_probs.size()) support_ok = false;
                for (std::size_t i = 0; i < level.size(); ++i) {
                    worst = std::max(worst, lexo::testing::log_rel_error(level.log_probs[i],
                                                                         ref.log_probs[level.run_lengths[i]]));
                    ++entries;
                }
            }
        }
    }
    const double secs = seconds_since(start);
    const bool ok = worst <= 1e-10 && support_ok && secs < 30.0;
    report(1, "oracle exactness", ok ? Verdict::Pass : Verdict::Fail,
           fmt("%zu sequences, %zu entries, max rel err %.3g (tol 1e-10), %.2f s (limit 30 s)", battery.size(),
               entries, worst, secs));
}

void moment_exactness(const std::vector<Battery>& battery) {
    const auto start = Clock::now();
    double worst_abs = 0.0;
    std::size_t violations = 0;
    std::size_t checks = 0;
    auto within = [&](double a, double b) {
        const double abs_err = std::abs(a - b);
        const double rel = lexo::testing::rel_error(a, b);
        worst_abs = std::max(worst_abs, std::min(abs_err, rel));
        ++checks;
        if (!(abs_err <= 1e-8 || rel <= 1e-6)) ++violations;
    };
    for (const auto& b : battery) {
        const std::size_t n = b.data.size();
        Detector det(b.model, b.hazard, {.lag = n - 1, .prune_threshold = 0.0});
        for (std::size_t t = 1; t <= n; ++t) {
            det.observe(b.data[t - 1]);
            for (std::size_t j = 0; j <= det.depth(); ++j) {
                const auto ref = enumerate_posterior(b.model, b.hazard, b.data, t - j, t);
                const auto e = det.parameters(j);
                within(e.posterior_mean, ref.posterior_mean);
                within(e.posterior_variance, ref.posterior_variance);
            }
        }
    }
    const double secs = seconds_since(start);
    const bool ok = violations == 0 && secs < 60.0;
    report(2, "moment exactness", ok ? Verdict::Pass : Verdict::Fail,
           fmt("%zu mean/variance checks, %zu outside 1e-8 abs / 1e-6 rel (worst min(abs,rel) %.3g), %.2f s "
               "(limit 60 s)",
               checks, violations, worst_abs, secs));
}

std::vector<double> synthetic_stream(ModelFamily family, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double level = static_cast<double>(i / 150 % 4);
        switch (family) {
        case ModelFamily::GaussianMeanShift: out.push_back(std::normal_distribution<double>(level, 1.0)(rng)); break;
        case ModelFamily::GaussianPrecisionShift:
            out.push_back(std::normal_distribution<double>(0.0, std::pow(2.0, level))(rng));
            break;
        case ModelFamily::PoissonGamma:
            out.push_back(static_cast<double>(std::poisson_distribution<int>(1.0 + 3.0 * level)(rng)));
            break;
        }
    }
    return out;
}

void lag_zero_identity() {
    std::size_t steps = 0;
    bool identical = true;
    for (auto family : lexo::testing::kFamilies) {
        const auto model = ConjugateModel::with_defaults(family);
        const auto hazard = HazardSpec::from_gap(100.0);
        const auto data = synthetic_stream(family, 10000, 11);
        ForwardFilter filter(model, hazard);
        Detector det(model, hazard, {.lag = 0});
        for (double x : data) {
            const auto& direct = filter.update(x);
            const auto* e = det.observe(x);
            ++steps;
            if (!e || e->distribution.run_lengths != direct.run_lengths ||
                e->distribution.log_probs != direct.log_probs || e->distribution.time_index != direct.time_index) {
                identical = false;
            }
            filter.prune(kDefaultPruneThreshold);
        }
    }
    report(3, "LEXO-0 equals EXO", identical ? Verdict::Pass : Verdict::Fail,
           fmt("%zu steps over 3 families, bit-identical log-space distributions: %s", steps,
               identical ? "yes" : "no"));
}

void normalization_and_weights() {
    double worst_off = 0.0;
    double worst_on = 0.0;
    double alpha_lo = 1.0;
    double alpha_hi = 0.0;
    double min_var = INFINITY;
    for (auto family : lexo::testing::kFamilies) {
        const auto model = ConjugateModel::with_defaults(family);
        const auto data = synthetic_stream(family, 1500, 23);
        for (double prune : {0.0, kDefaultPruneThreshold}) {
            Detector det(model, HazardSpec::from_gap(50.0), {.lag = 10, .prune_threshold = prune});
            for (double x : data) {
                det.observe(x);
                for (std::size_t j = 0; j <= det.depth(); ++j) {
                    const double err = std::abs(det.smoothed(j).total_mass() - 1.0);
                    (prune == 0.0 ? worst_off : worst_on) = std::max(prune == 0.0 ? worst_off : worst_on, err);
                    const auto e = det.parameters(j);
                    min_var = std::min(min_var, e.posterior_variance);
                    for (double a : e.alpha) {
                        alpha_lo = std::min(alpha_lo, a);
                        alpha_hi = std::max(alpha_hi, a);
                    }
                }
            }
        }
    }
    const bool ok = worst_off <= 1e-10 && worst_on <= 1e-6 && alpha_lo >= 0.0 && alpha_hi <= 1.0 && min_var >= 0.0;
    report(4, "normalization and weights", ok ? Verdict::Pass : Verdict::Fail,
           fmt("max |mass-1| %.3g unpruned (tol 1e-10), %.3g pruned (tol 1e-6); alpha in [%.3g, %.3g]; min "
               "variance %.3g",
               worst_off, worst_on, alpha_lo, alpha_hi, min_var));
}

void complexity_contract() {
    const auto start = Clock::now();
    const auto model = ConjugateModel::gaussian_mean_shift();
    const auto data = synthetic_stream(ModelFamily::GaussianMeanShift, 2000, 31);
    std::vector<RunLengthDistribution> filtered;
    filtered.reserve(data.size());
    ForwardFilter f(model, HazardSpec::from_gap(50.0));
    for (double x : data) filtered.push_back(f.update(x));

    auto time_lag = [&](std::size_t lag) {
        double best = INFINITY;
        for (int rep = 0; rep < 3; ++rep) {
            LexoSmoother s(lag);
            const auto t0 = Clock::now();
            for (const auto& d : filtered) s.smooth_step(d);
            best = std::min(best, seconds_since(t0));
        }
        return best;
    };
    const std::vector<std::size_t> lags = {8, 16, 32, 64, 128};
    std::vector<double> times;
    for (auto l : lags) times.push_back(time_lag(l));
    double worst = 0.0;
    std::string detail;
    for (std::size_t i = 0; i + 1 < lags.size(); ++i) {
        const double ratio = times[i + 1] / times[i];
        worst = std::max(worst, ratio);
        detail += fmt("t(%zu)/t(%zu)=%.2f ", lags[i + 1], lags[i], ratio);
    }
    const double secs = seconds_since(start);
    const bool ok = worst <= 2.5 && secs < 120.0;
    report(5, "complexity contract", ok ? Verdict::Pass : Verdict::Fail,
           detail + fmt("(limit 2.5), 2000 steps unpruned, %.1f s total", secs));
}

struct SimResults {
    std::map<SimProcess, ExperimentReport> reports;
    double seconds = 0.0;
};

SimResults run_simulations() {
    SimResults out;
    const auto start = Clock::now();
    for (auto p : {SimProcess::MeanShift, SimProcess::PrecisionShift, SimProcess::Poisson}) {
        SimConfig cfg;
        cfg.process = p;
        cfg.replications = 200;
        out.reports.emplace(p, run_experiment(cfg));
    }
    out.seconds = seconds_since(start);
    return out;
}

void table_regeneration(const SimResults& sim) {
    bool ok = sim.seconds < 900.0;
    std::string detail;
    for (const auto& [process, rep] : sim.reports) {
        detail += std::string(to_string(process)) + " t=220";
        for (std::size_t lag : {5u, 15u, 30u}) {
            const double r = rep.row(lag, 220).mse_ratio;
            detail += fmt(" l%zu=%.4g", lag, r);
            if (!(r > 1.0)) ok = false;
        }
        detail += "; ";
    }
    const double mean30 = sim.reports.at(SimProcess::MeanShift).row(30, 220).mse_ratio;
    const double prec30 = sim.reports.at(SimProcess::PrecisionShift).row(30, 220).mse_ratio;
    if (!(mean30 >= 2.0 && mean30 <= 4.5)) ok = false;
    if (!(prec30 > 100.0)) ok = false;
    detail += fmt("need all > 1, mean-shift l30 in [2, 4.5], precision-shift l30 > 100; 200 reps in %.1f s",
                  sim.seconds);
    report(6, "MSE ratio table", ok ? Verdict::Pass : Verdict::Fail, detail);
}

void map_reset(const SimResults& sim) {
    bool ok = true;
    std::string detail;
    for (const auto& [process, rep] : sim.reports) {
        const auto lexo = rep.median_map_trace(30);
        const auto exo = rep.median_map_trace(0);
        std::size_t within = 0;
        std::size_t later = 0;
        std::string resets;
        const auto& cps = generate(rep.config, 0).truth.changepoints;
        for (std::size_t c : cps) {
            const auto l = map_reset_time(lexo, c, 5);
            const auto e = map_reset_time(exo, c, rep.config.regime_length - 1);
            if (l) ++within;
            if (l && (!e || *e > *l)) ++later;
            resets += fmt("%zu:%s/%s ", c, l ? std::to_string(*l - c).c_str() : "-",
                          e ? std::to_string(*e - c).c_str() : "-");
        }
        if (within != cps.size() || later < 4) ok = false;
        detail += std::string(to_string(process)) + fmt(" lexo30 within 5: %zu/%zu, exo later: %zu/%zu [", within,
                                                        cps.size(), later, cps.size()) +
                  resets + "]; ";
    }
    report(7, "median MAP reset", ok ? Verdict::Pass : Verdict::Fail, detail + "delays shown as lexo30/exo");
}

void coal_mine() {
    const auto start = Clock::now();
    const auto counts = load_coal_mine_counts();
    bool ok = counts.size() == 112;
    std::string detail;
    for (std::size_t lag : {25u, 30u}) {
        RunConfig cfg;
        cfg.model = ConjugateModel::poisson_gamma(1.0, 1e-4);
        cfg.hazard = 1.0 / 50.0;
        cfg.lag = lag;
        const auto rows = detect_series(cfg, counts);
        const auto& last = rows.back();
        const std::size_t location = last.time - last.map_run_length;
        // Pre-change estimate: the last year before the detected change.
        double pre = NAN;
        for (const auto& r : rows) {
            if (r.time + 1 == location) pre = r.post_mean;
        }
        const double post = last.post_mean;
        const bool lag_ok = location + 1 >= 41 && location <= 42 && pre >= 2.5 && pre <= 3.5 && post >= 0.7 &&
                            post <= 1.4;
        ok = ok && lag_ok;
        detail += fmt("l%zu: change at index %zu (41 +- 1), rate %.3f -> %.3f; ", lag, location, pre, post);
    }
    const double secs = seconds_since(start);
    ok = ok && secs < 5.0;
    report(8, "coal mine", ok ? Verdict::Pass : Verdict::Fail,
           detail + fmt("pre in [2.5, 3.5], post in [0.7, 1.4], %.2f s (limit 5 s)", secs));
}

void dow_jones() {
    const char* path = std::getenv("LEXO_DOWJONES_CSV");
    if (!path || !*path) {
        report(9, "Dow Jones", Verdict::Skip, "set LEXO_DOWJONES_CSV to a closing-price CSV to run");
        return;
    }
    std::ifstream in(path);
    if (!in) {
        report(9, "Dow Jones", Verdict::Fail, std::string("cannot open ") + path);
        return;
    }
    std::vector<double> prices;
    for (const auto& r : read_records(in)) prices.push_back(r.value);
    const auto returns = returns_transform(prices);

    RunConfig cfg;
    cfg.model = ConjugateModel::gaussian_precision_shift(1.0, 1e-4, 0.0);
    cfg.hazard = 1.0 / 250.0;
    cfg.lag = 100;
    const auto rows = detect_series(cfg, returns);
    const auto cps = changepoints_from(rows, cfg.gap);

    const std::size_t targets[] = {178, 330, 384, 505, 526, 591, 601};
    std::size_t hits = 0;
    std::string found;
    for (std::size_t target : targets) {
        bool hit = false;
        for (const auto& cp : cps) {
            const auto d = cp.location > target ? cp.location - target : target - cp.location;
            if (d <= 5) hit = true;
        }
        if (hit) ++hits;
    }
    for (const auto& cp : cps) found += std::to_string(cp.location) + " ";
    report(9, "Dow Jones", hits >= 5 ? Verdict::Pass : Verdict::Fail,
           fmt("%zu returns, %zu/7 reference changepoints matched within 5 (need 5); declared: ", returns.size(),
               hits) +
               found);
}

} // namespace

int main() {
    const auto battery = make_battery();
    oracle_exactness(battery);
    moment_exactness(battery);
    lag_zero_identity();
    normalization_and_weights();
    complexity_contract();
    const auto sim = run_simulations();
    table_regeneration(sim);
    map_reset(sim);
    coal_mine();
    dow_jones();
    std::printf("%s\n", g_failures == 0 ? "acceptance: all criteria passed or skipped"
                                        : fmt("acceptance: %d criteria failed", g_failures).c_str());
    return g_failures == 0 ? 0 : 1;
}
