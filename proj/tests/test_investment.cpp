// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "infogeo/infogeo.hpp"
#include "testutil.hpp"

using namespace infogeo;
using Catch::Approx;

namespace {

const Grid kGrid = make_grid(0.25, 4.0, 512, GridScheme::LogUniform);

Distribution market() { return MarketFamily::lognormal(0.25).density(kGrid); }

}  // namespace

TEST_CASE("utility_optimal_product") {
    const Distribution m = market();
    std::mt19937_64 rng(401);

    SECTION("no view buys cash for any utility") {
        for (double R : {0.5, 1.0, 2.0, 5.0}) {
            const Payoff F = utility_optimal_product(m, m, utility_crra(R));
            for (std::size_t i = 0; i < F.size(); ++i) CHECK(F[i] == Approx(1.0).margin(1e-10));
        }
    }

    SECTION("CRRA reproduces the power product") {
        const Distribution b = testutil::random_tilt_of(m, rng);
        const Payoff f = likelihood_product(b, m);
        for (double R : {0.5, 2.0, 5.0}) {
            const Payoff F = utility_optimal_product(b, m, utility_crra(R));
            CHECK(testutil::product_distance(F, power_product(f, R, m), m) < 1e-9);
        }
    }

    SECTION("log utility buys the likelihood product") {
        const Distribution b = testutil::random_tilt_of(m, rng);
        const Payoff F = utility_optimal_product(b, m, utility_log());
        CHECK(testutil::product_distance(F, likelihood_product(b, m), m) < 1e-9);
    }

    SECTION("payoff elasticity equation holds pointwise") {
        const Distribution b = testutil::random_tilt_of(m, rng);
        const Utility U = utility_crra(2.0);
        const Payoff F = utility_optimal_product(b, m, U);
        const auto e = hedge_elasticity(F, likelihood_product(b, m));
        for (std::size_t i = 1; i + 1 < e.size(); ++i)
            CHECK(e[i] == Approx(1.0 / U.relative_risk_aversion(F[i])).margin(1e-5));
    }

    SECTION("first-order optimality against zero-price perturbations") {
        const Distribution b = testutil::random_tilt_of(m, rng);
        const Utility U = utility_crra(2.0);
        const Payoff F = utility_optimal_product(b, m, U);
        double expected = 0.0;
        for (std::size_t i = 0; i < kGrid.size(); ++i)
            expected += kGrid.weight(i) * b[i] * U.value(F[i]);

        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int k = 0; k < 100; ++k) {
            std::vector<double> v(kGrid.size());
            for (double& x : v) x = gauss(rng);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < kGrid.size(); ++i) {
                num += kGrid.weight(i) * m[i] * v[i];
                den += kGrid.weight(i) * m[i];
            }
            for (std::size_t i = 0; i < kGrid.size(); ++i) v[i] -= num / den;  // zero price

            double bound = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < kGrid.size(); ++i)
                if (std::abs(v[i]) > 0.0) bound = std::min(bound, F[i] / std::abs(v[i]));
            const double eps = 0.25 * bound;
            double perturbed = 0.0;
            for (std::size_t i = 0; i < kGrid.size(); ++i)
                perturbed += kGrid.weight(i) * b[i] * U.value(F[i] + eps * v[i]);
            CHECK(perturbed <= expected + 1e-12);
        }
    }
}

TEST_CASE("elasticity_ode_product") {
    const Distribution m = market();
    std::mt19937_64 rng(409);
    const Distribution b = testutil::random_tilt_of(m, rng);
    const Payoff f = likelihood_product(b, m);

    SECTION("constant aversion matches the power product") {
        for (double R : {0.5, 2.0}) {
            const Payoff F = elasticity_ode_product(f, [R](double) { return R; }, m);
            CHECK(testutil::product_distance(F, power_product(f, R, m), m) < 1e-8);
        }
    }

    SECTION("unit aversion is proportional to f") {
        const Payoff F = elasticity_ode_product(f, [](double) { return 1.0; }, m);
        CHECK(testutil::product_distance(F, f, m) < 1e-9);
    }

    SECTION("piecewise-constant aversion glues power laws continuously") {
        const auto R_of = [](double F) { return F < 1.0 ? 2.0 : 0.5; };
        const Payoff F = elasticity_ode_product(f, R_of, m);

        // Hand-integrated oracle: G(y) = (y - y*)/2 below the crossing and
        // 2 (y - y*) above it; y* fixed by unit price.
        const std::vector<double> log_f = safe_log(f.values(), kGrid, "test");
        const auto price_of = [&](double ystar) {
            double acc = 0.0;
            for (std::size_t i = 0; i < kGrid.size(); ++i) {
                const double y = log_f[i];
                const double G = y < ystar ? 0.5 * (y - ystar) : 2.0 * (y - ystar);
                acc += kGrid.weight(i) * m[i] * std::exp(G);
            }
            return acc;
        };
        double lo = -5.0, hi = 5.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (price_of(mid) > 1.0 ? lo : hi) = mid;
        }
        const double ystar = 0.5 * (lo + hi);
        std::vector<double> oracle(kGrid.size());
        for (std::size_t i = 0; i < kGrid.size(); ++i) {
            const double y = log_f[i];
            oracle[i] = std::exp(y < ystar ? 0.5 * (y - ystar) : 2.0 * (y - ystar));
        }
        CHECK(testutil::max_abs_diff(F.values(), oracle) < 1e-6);
    }

    SECTION("vanishing aversion is stiff") {
        CHECK_THROWS_AS(
            elasticity_ode_product(f, [](double) { return 1e-12; }, m), StiffProfile);
    }
}

TEST_CASE("partially_hedged_product") {
    const Distribution m = market();
    std::mt19937_64 rng(419);
    const Distribution b = testutil::random_tilt_of(m, rng);
    const Utility U = utility_crra(2.0);
    const Payoff s = unit_price(testutil::random_positive_payoff(kGrid, rng), m);

    SECTION("inactive constraint recovers the unconstrained product") {
        const Payoff F0 = utility_optimal_product(b, m, U);
        const double r0 = specific_risk(F0, s, m);
        const auto res = partially_hedged_product(b, m, U, s, r0);
        CHECK(std::abs(res.alpha_r) < 1e-7);
        CHECK(testutil::product_distance(res.payoff, F0, m) < 1e-9);
        for (std::size_t i = 1; i + 1 < kGrid.size(); ++i)
            CHECK(res.modified_aversion[i] == Approx(2.0).margin(1e-5));
    }

    SECTION("CRRA closed form meets both constraints") {
        for (double r : {0.0, 0.01, -0.02}) {
            const auto res = partially_hedged_product(b, m, U, s, r);
            CHECK(std::abs(res.residual_price) < 1e-9);
            CHECK(std::abs(res.residual_risk) < 1e-9);
            CHECK(price(res.payoff, m) == Approx(1.0).margin(1e-9));
            CHECK(specific_risk(res.payoff, s, m) == Approx(r).margin(1e-9));

            // Closed form F = (f/(nu + rho ln S))^{1/R}.
            const std::vector<double> log_s = safe_log(s.values(), kGrid, "test");
            const Payoff f = likelihood_product(b, m);
            const double fprice = price(f, m);
            for (std::size_t i = 0; i < kGrid.size(); i += 37) {
                const double expect = std::pow(
                    f[i] * fprice / (res.nu + res.rho * log_s[i]), 1.0 / 2.0);
                CHECK(res.payoff[i] == Approx(expect).epsilon(1e-7));
            }
        }
    }

    SECTION("elasticity matches the modified aversion profile") {
        const auto res = partially_hedged_product(b, m, U, s, 0.015);
        const auto e = hedge_elasticity(res.payoff, likelihood_product(b, m));
        for (std::size_t i = 1; i + 1 < kGrid.size(); ++i) {
            if (std::isnan(e[i]) || std::isnan(res.modified_aversion[i])) continue;
            CHECK(e[i] == Approx(1.0 / res.modified_aversion[i]).margin(1e-5));
        }
    }

    SECTION("zero target against the score product kills the initial sensitivity") {
        const Grid g6 = make_grid(-6.0, 6.0, 512, GridScheme::Uniform);
        const MarketFamily fam = MarketFamily::normal(1.0);
        const Distribution m6 = fam.density(g6);
        const Distribution b6 = testutil::random_tilt_of(m6, rng, 0.6);
        const Payoff f0 = score_product(fam, g6, 1.0, 1e-4);
        const auto res = partially_hedged_product(b6, m6, utility_crra(2.0), f0, 0.0);
        const auto sens = sensitivity_check(fam, g6, res.payoff, 1.0, 1e-4);
        CHECK(sens.fd == Approx(0.0).margin(1e-6));
        CHECK(sens.spread == Approx(0.0).margin(1e-6));
    }

    SECTION("infeasible targets are loud") {
        CHECK_THROWS_AS(partially_hedged_product(b, m, U, s, 100.0), SolverError);
    }
}

TEST_CASE("duality_check") {
    const Distribution m = market();
    std::mt19937_64 rng(421);

    SECTION("no view collapses to cash on both sides") {
        const auto rep = duality_check(utility_crra(2.0), m, m);
        CHECK(rep.max_abs_deviation < 1e-10);
        CHECK(std::abs(rep.risk) < 1e-12);
    }

    SECTION("CRRA with a smooth tilt view") {
        const Distribution b = testutil::random_tilt_of(m, rng, 0.8);
        const auto rep = duality_check(utility_crra(2.0), b, m);
        CHECK(rep.max_abs_deviation < 1e-7);
        CHECK(rep.mu > 0.0);
    }

    SECTION("log utility with a digital-tilt view") {
        std::vector<double> raw(kGrid.size());
        for (std::size_t i = 0; i < kGrid.size(); ++i)
            raw[i] = m[i] * (kGrid.point(i) > 1.2 ? 1.5 : 1.0);
        const Distribution b = normalize(raw, kGrid);
        const auto rep = duality_check(utility_log(), b, m);
        CHECK(rep.max_abs_deviation < 1e-7);
    }
}

TEST_CASE("recycle") {
    const Distribution m = market();
    std::mt19937_64 rng(431);
    const Payoff s = unit_price(testutil::random_positive_payoff(kGrid, rng), m);

    SECTION("holding the scenario itself recycles long") {
        const auto plan = recycle(s, s, m, phi_kl());
        CHECK(plan.direction == RecycleDirection::LongScenario);
        CHECK(plan.exposure > 0.0);
        const Distribution beta_s = implied_view(s, m);
        CHECK(testutil::max_abs_diff(plan.implied_belief.density(), beta_s.density()) < 1e-12);
    }

    SECTION("negative exposure recycles short with the mirrored belief") {
        const Payoff s_bar = reciprocal_product(s, m);
        const double direct = specific_risk(s_bar, s, m);
        REQUIRE(direct < 0.0);
        const auto plan = recycle(s_bar, s, m, phi_kl());
        CHECK(plan.direction == RecycleDirection::ShortScenario);
        CHECK(specific_risk(s_bar, s_bar, m) == Approx(-direct).margin(1e-10));
        const Distribution beta_bar = implied_view(s_bar, m);
        CHECK(testutil::max_abs_diff(plan.implied_belief.density(), beta_bar.density()) < 1e-12);
    }

    SECTION("KL recycling implies a CRRA client") {
        const Payoff a = testutil::random_positive_payoff(kGrid, rng);
        const auto plan = recycle(a, s, m, phi_kl());
        const double expect = 1.0 / std::abs(plan.mu);
        for (double rv : plan.implied_risk_aversion) CHECK(rv == Approx(expect).epsilon(1e-12));
    }

    SECTION("aversion stays positive across phi families and random assets") {
        for (const auto& phi : {phi_kl(), phi_reverse_kl(), phi_alpha(1.5)}) {
            for (int k = 0; k < 10; ++k) {
                const Payoff a = testutil::random_positive_payoff(kGrid, rng, 0.6);
                const auto plan = recycle(a, s, m, phi);
                for (double rv : plan.implied_risk_aversion) CHECK(rv > 0.0);
            }
        }
    }

    SECTION("cash has nothing to recycle") {
        CHECK_THROWS_AS(recycle(constant_payoff(kGrid), s, m, phi_kl()), ZeroExposure);
    }
}
