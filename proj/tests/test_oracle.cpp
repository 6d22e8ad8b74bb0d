#include "lexo/error.hpp"
#include "lexo/oracle.hpp"

#include "support/cases.hpp"
#include "support/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace lexo;

TEST_SUITE("oracle") {

TEST_CASE("a single point is a fresh regime") {
    const auto ref = enumerate_posterior(ConjugateModel::poisson_gamma(), HazardSpec::from_gap(50.0),
                                         std::vector<double>{3.0}, 1, 1);
    REQUIRE(ref.log_probs.size() == 1);
    CHECK(ref.log_probs[0] == 0.0);
}

TEST_CASE("vanishing hazard leaves only the unbroken segmentation") {
    const std::vector<double> x = {0.5, -1.0, 2.0, 0.3, 1.1};
    const auto ref = enumerate_posterior(ConjugateModel::gaussian_mean_shift(), HazardSpec::from_hazard(1e-200), x,
                                         5, 5);
    CHECK(std::exp(ref.log_probs[4]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("marginals sum to one") {
    std::mt19937_64 rng(6);
    for (auto family : lexo::testing::kFamilies) {
        const auto model = lexo::testing::random_model(family, rng);
        const auto x = lexo::testing::random_data(family, 8, rng);
        for (std::size_t s = 1; s <= 8; ++s) {
            const auto ref = enumerate_posterior(model, HazardSpec::from_hazard(0.2), x, s, 8);
            double total = 0.0;
            for (double lp : ref.log_probs) total += std::exp(lp);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(ref.posterior_variance >= 0.0);
        }
    }
}

TEST_CASE("segment marginals agree with quadrature") {
    const auto model = ConjugateModel::poisson_gamma(2.0, 0.5);
    const std::vector<double> seg = {1, 4, 2};
    const auto q = lexo::testing::integrate({lexo::testing::QuadFamily::PoissonRate, 2.0, 0.5}, seg);
    CHECK(std::abs(segment_log_marginal(model, seg) - q.log_z) < 1e-9);
    const auto m = segment_moments(model, seg);
    CHECK(lexo::testing::rel_error(m.m1, q.m1) < 1e-9);
    CHECK(lexo::testing::rel_error(m.m2, q.m2) < 1e-9);

    const auto g = ConjugateModel::gaussian_mean_shift(0.5, 0.8, 1.5);
    const std::vector<double> gs = {0.2, 1.7};
    const auto gq = lexo::testing::integrate({lexo::testing::QuadFamily::NormalMean, 0.5, 0.8, 1.5}, gs);
    CHECK(std::abs(segment_log_marginal(g, gs) - gq.log_z) < 1e-9);
}

TEST_CASE("requests beyond the enumeration limit are refused") {
    const std::vector<double> x(kOracleMaxLength + 1, 1.0);
    CHECK_THROWS_AS(enumerate_posterior(ConjugateModel::poisson_gamma(), HazardSpec::from_gap(50.0), x, 1, x.size()),
                    OracleLimitError);
    CHECK_NOTHROW(enumerate_posterior(ConjugateModel::poisson_gamma(), HazardSpec::from_gap(50.0),
                                      std::span<const double>(x).first(kOracleMaxLength), 1, kOracleMaxLength));
    CHECK_THROWS(enumerate_posterior(ConjugateModel::poisson_gamma(), HazardSpec::from_gap(50.0),
                                     std::vector<double>{1, 2}, 3, 2));
}

TEST_CASE("frozen golden posteriors") {
    const auto model = ConjugateModel::poisson_gamma();
    const auto hazard = HazardSpec::from_gap(50.0);
    const std::vector<double> x = {1, 1, 1, 9, 9, 9};
    std::size_t rows = 0;
    for (const auto& row : lexo::testing::read_csv_rows(LEXO_GOLDEN_DIR "/poisson_111999/oracle.csv")) {
        const auto t = std::stoul(row[0]);
        const auto s = std::stoul(row[1]);
        const auto r = std::stoul(row[2]);
        const auto ref = enumerate_posterior(model, hazard, x, s, t);
        CHECK(lexo::testing::log_rel_error(ref.log_probs[r], std::stod(row[3])) < 1e-12);
        CHECK(lexo::testing::rel_error(ref.moments[r].m1, std::stod(row[5])) < 1e-12);
        CHECK(lexo::testing::rel_error(ref.moments[r].m2, std::stod(row[6])) < 1e-12);
        ++rows;
    }
    CHECK(rows == 56);
    for (const auto& row : lexo::testing::read_csv_rows(LEXO_GOLDEN_DIR "/poisson_111999/summary.csv")) {
        const auto ref = enumerate_posterior(model, hazard, x, std::stoul(row[1]), std::stoul(row[0]));
        CHECK(lexo::testing::rel_error(ref.log_evidence, std::stod(row[2])) < 1e-12);
        CHECK(lexo::testing::rel_error(ref.posterior_mean, std::stod(row[3])) < 1e-12);
    }
}

}
