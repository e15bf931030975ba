// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "infogeo/infogeo.hpp"
#include "testutil.hpp"

using namespace infogeo;
using Catch::Approx;

namespace {

const Grid kGrid = make_grid(-8.0, 8.0, 512, GridScheme::Uniform);

/// Gaussian observation kernel rows P(y|x) = N(y; x, noise^2), normalized
/// on the observation grid.
ObservationModel gaussian_model(const Grid& x_grid, const Grid& y_grid, double noise) {
    std::vector<std::vector<double>> kernel(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        std::vector<double> row(y_grid.size());
        for (std::size_t j = 0; j < y_grid.size(); ++j) {
            const double z = (y_grid.point(j) - x_grid.point(i)) / noise;
            row[j] = std::exp(-0.5 * z * z);
        }
        double mass = 0.0;
        for (std::size_t j = 0; j < y_grid.size(); ++j) mass += y_grid.weight(j) * row[j];
        for (double& v : row) v /= mass;
        kernel[i] = std::move(row);
    }
    return ObservationModel(x_grid, y_grid, std::move(kernel));
}

void check_product_form(const InferenceResult& res, const Distribution& prior) {
    // posterior = product * prior pointwise, with the product at unit price.
    CHECK(price(res.product, prior) == Approx(1.0).margin(1e-10));
    for (std::size_t i = 0; i < prior.size(); i += 17)
        CHECK(res.posterior[i] == Approx(res.product[i] * prior[i]).margin(1e-10));
}

}  // namespace

TEST_CASE("bayes_likelihood") {
    const Distribution prior = testutil::truncated_normal(kGrid, 0.0, 1.0);

    SECTION("flat likelihood is uninformative") {
        const auto res = bayes_likelihood(prior, std::vector<double>(kGrid.size(), 3.0));
        CHECK(testutil::max_abs_diff(res.posterior.density(), prior.density()) < 1e-12);
        for (std::size_t i = 0; i < kGrid.size(); ++i)
            CHECK(res.product[i] == Approx(1.0).margin(1e-12));
    }

    SECTION("conjugate Gaussian update") {
        std::vector<double> lik(kGrid.size());
        for (std::size_t i = 0; i < kGrid.size(); ++i) {
            const double z = 0.5 - kGrid.point(i);
            lik[i] = std::exp(-0.5 * z * z);
        }
        const auto res = bayes_likelihood(prior, lik);
        const Distribution expect = testutil::truncated_normal(kGrid, 0.25, std::sqrt(0.5));
        CHECK(testutil::max_abs_diff(res.posterior.density(), expect.density()) < 1e-6);
        check_product_form(res, prior);
    }

    SECTION("evidence normalizes the likelihood product") {
        std::mt19937_64 rng(501);
        const auto lik = testutil::random_smooth_positive(kGrid, rng);
        const auto res = bayes_likelihood(prior, lik);
        CHECK(expectation(prior, res.product.values()) == Approx(1.0).margin(1e-10));
    }

    SECTION("zero evidence is loud") {
        CHECK_THROWS_AS(bayes_likelihood(prior, std::vector<double>(kGrid.size(), 0.0)),
                        ZeroEvidence);
    }
}

TEST_CASE("jeffrey_likelihood") {
    const Grid y_grid = make_grid(-9.0, 9.0, 257, GridScheme::Uniform);
    const Distribution prior = testutil::truncated_normal(kGrid, 0.0, 1.0);
    const ObservationModel model = gaussian_model(kGrid, y_grid, 0.8);

    SECTION("spike evidence reduces to the Bayesian update") {
        const std::size_t j0 = 150;
        std::vector<double> spike(y_grid.size(), 0.0);
        spike[j0] = 1.0 / y_grid.weight(j0);
        const Distribution evidence(y_grid, spike);
        const auto jeffrey = jeffrey_likelihood(prior, model, evidence);

        std::vector<double> row(kGrid.size());
        for (std::size_t i = 0; i < kGrid.size(); ++i) row[i] = model.kernel()[i][j0];
        const auto bayes = bayes_likelihood(prior, row);
        CHECK(testutil::max_abs_diff(jeffrey.posterior.density(), bayes.posterior.density()) <
              1e-10);
        check_product_form(jeffrey, prior);
    }

    SECTION("the prior predictive itself is uninformative") {
        std::vector<double> marginal(y_grid.size(), 0.0);
        for (std::size_t i = 0; i < kGrid.size(); ++i)
            for (std::size_t j = 0; j < y_grid.size(); ++j)
                marginal[j] += kGrid.weight(i) * prior[i] * model.kernel()[i][j];
        const Distribution evidence = normalize(marginal, y_grid);
        const auto res = jeffrey_likelihood(prior, model, evidence);
        CHECK(testutil::max_abs_diff(res.posterior.density(), prior.density()) < 1e-7);
    }

    SECTION("two-component evidence matches a double-quadrature oracle") {
        std::vector<double> two(y_grid.size(), 0.0);
        for (std::size_t j = 0; j < y_grid.size(); ++j) {
            const double y = y_grid.point(j);
            two[j] = std::exp(-0.5 * (y - 1.0) * (y - 1.0) / 0.09) +
                     0.7 * std::exp(-0.5 * (y + 1.5) * (y + 1.5) / 0.04);
        }
        const Distribution evidence = normalize(two, y_grid);
        const auto res = jeffrey_likelihood(prior, model, evidence);

        // Oracle: direct double integral of evidence(y) P(y|x) / P(y).
        std::vector<double> marginal(y_grid.size(), 0.0);
        for (std::size_t i = 0; i < kGrid.size(); ++i)
            for (std::size_t j = 0; j < y_grid.size(); ++j)
                marginal[j] += kGrid.weight(i) * prior[i] * model.kernel()[i][j];
        std::vector<double> lj(kGrid.size(), 0.0);
        for (std::size_t i = 0; i < kGrid.size(); ++i)
            for (std::size_t j = 0; j < y_grid.size(); ++j)
                lj[i] += y_grid.weight(j) * evidence[j] * model.kernel()[i][j] / marginal[j];
        std::vector<double> post(kGrid.size());
        for (std::size_t i = 0; i < kGrid.size(); ++i) post[i] = lj[i] * prior[i];
        const Distribution oracle = normalize(post, kGrid);
        CHECK(testutil::max_abs_diff(res.posterior.density(), oracle.density()) < 1e-8);
    }

    SECTION("evidence outside the predictive support is loud") {
        // Compactly supported kernel rows: a window around each x.
        const Grid xg = make_grid(-1.0, 1.0, 65, GridScheme::Uniform);
        const Grid yg = make_grid(-4.0, 4.0, 129, GridScheme::Uniform);
        std::vector<std::vector<double>> kernel(xg.size());
        for (std::size_t i = 0; i < xg.size(); ++i) {
            std::vector<double> row(yg.size(), 0.0);
            for (std::size_t j = 0; j < yg.size(); ++j)
                if (std::abs(yg.point(j) - xg.point(i)) <= 0.5) row[j] = 1.0;
            double mass = 0.0;
            for (std::size_t j = 0; j < yg.size(); ++j) mass += yg.weight(j) * row[j];
            for (double& v : row) v /= mass;
            kernel[i] = std::move(row);
        }
        const ObservationModel window(xg, yg, std::move(kernel));
        const Distribution p = testutil::truncated_normal(xg, 0.0, 0.5);
        std::vector<double> spike(yg.size(), 0.0);
        spike[0] = 1.0 / yg.weight(0);  // y = -4, unreachable from |x| <= 1
        CHECK_THROWS_AS(jeffrey_likelihood(p, window, Distribution(yg, spike)),
                        SupportViolation);
    }
}

TEST_CASE("canonical_likelihood") {
    const Distribution prior = testutil::truncated_normal(kGrid, 0.0, 1.0);
    const std::vector<double>& x = kGrid.points();

    SECTION("prior mean is a zero tilt") {
        const double target = expectation(prior, x);
        const auto res = canonical_likelihood(prior, x, target);
        CHECK(std::abs(res.c) < 1e-10);
        CHECK(testutil::max_abs_diff(res.posterior.density(), prior.density()) < 1e-10);
    }

    SECTION("Gaussian exponential tilt closed form") {
        const auto res = canonical_likelihood(prior, x, 0.3);
        CHECK(res.c == Approx(0.3).margin(1e-4));
        const Distribution expect = testutil::truncated_normal(kGrid, 0.3, 1.0);
        CHECK(testutil::max_abs_diff(res.posterior.density(), expect.density()) < 1e-6);
        CHECK(expectation(res.posterior, x) == Approx(0.3).margin(1e-9));
    }

    SECTION("tilt multiplier grows with the target") {
        double prev = -std::numeric_limits<double>::infinity();
        for (double target : {-0.6, -0.2, 0.1, 0.4, 0.9}) {
            const auto res = canonical_likelihood(prior, x, target);
            CHECK(res.c > prev);
            prev = res.c;
        }
    }

    SECTION("targets outside the payoff range are unreachable") {
        CHECK_THROWS_AS(canonical_likelihood(prior, x, 9.5), TargetUnreachable);
        CHECK_THROWS_AS(canonical_likelihood(prior, x, -9.5), TargetUnreachable);
    }

    SECTION("divergence optimality among constraint-satisfying laws") {
        std::mt19937_64 rng(521);
        const double target = 0.25;
        const auto res = canonical_likelihood(prior, x, target);
        const double objective = kl_divergence(res.posterior, prior);
        const double e_prior = expectation(prior, x);
        for (int k = 0; k < 100; ++k) {
            const auto seed = testutil::random_smooth_positive(kGrid, rng);
            const Distribution cand =
                testutil::feasible_tilt(seed, prior, x, target - e_prior);
            CHECK(kl_divergence(cand, prior) >= objective - 1e-12);
        }
    }

    SECTION("tilting by the log-scenario lands on the e-geodesic") {
        const Grid desk = make_grid(0.25, 4.0, 512, GridScheme::LogUniform);
        const Distribution m = MarketFamily::lognormal(0.25).density(desk);
        std::mt19937_64 rng(523);
        const Payoff s = unit_price(testutil::random_positive_payoff(desk, rng), m);
        const auto log_s = safe_log(s.values(), desk, "test");
        const double target = expectation(m, log_s) + 0.1;
        const auto res = canonical_likelihood(m, log_s, target);
        const Distribution on_geo = e_geodesic(m, implied_view(s, m), res.c);
        CHECK(testutil::max_abs_diff(res.posterior.density(), on_geo.density()) < 1e-9);
    }
}
