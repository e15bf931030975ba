// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infogeo/distribution.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/payoff.hpp"
#include "infogeo/products.hpp"
#include "infogeo/root_finding.hpp"

namespace infogeo {

/// Imperfect-measurement model: a conditional density P(y|x) per grid node
/// of x, each row normalized over the observation grid.
class ObservationModel {
public:
    ObservationModel(Grid x_grid, Grid y_grid, std::vector<std::vector<double>> kernel)
        : x_grid_(std::move(x_grid)), y_grid_(std::move(y_grid)), kernel_(std::move(kernel)) {
        if (kernel_.size() != x_grid_.size())
            throw GridMismatch("ObservationModel: kernel row count must match the x grid");
        for (std::size_t i = 0; i < kernel_.size(); ++i) {
            const auto& row = kernel_[i];
            if (row.size() != y_grid_.size())
                throw GridMismatch("ObservationModel: kernel row length must match the y grid");
            double mass = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (!(row[j] >= 0.0))
                    throw DomainViolation("ObservationModel: kernel must be nonnegative");
                mass += y_grid_.weight(j) * row[j];
            }
            if (std::abs(mass - 1.0) > 1e-8)
                throw DomainViolation("ObservationModel: row " + std::to_string(i) +
                                      " integrates to " + std::to_string(mass));
        }
    }

    const Grid& x_grid() const { return x_grid_; }
    const Grid& y_grid() const { return y_grid_; }
    const std::vector<std::vector<double>>& kernel() const { return kernel_; }

private:
    Grid x_grid_;
    Grid y_grid_;
    std::vector<std::vector<double>> kernel_;
};

struct InferenceResult {
    Distribution posterior;
    Payoff product;  // the likelihood product at unit price under the prior
};

/// Classical Bayesian update: L_B = P(D|x)/P(D) with the evidence taken
/// under the prior. The product is L_B as a unit-price payoff.
inline InferenceResult bayes_likelihood(const Distribution& prior,
                                        std::span<const double> likelihood_of_data) {
    require_size(prior.grid(), likelihood_of_data.size(), "bayes_likelihood");
    const auto& w = prior.grid().weights();
    double evidence = 0.0;
    for (std::size_t i = 0; i < likelihood_of_data.size(); ++i) {
        if (!(likelihood_of_data[i] >= 0.0))
            throw DomainViolation("bayes_likelihood: likelihood must be nonnegative");
        evidence += w[i] * prior[i] * likelihood_of_data[i];
    }
    if (!(evidence > 0.0))
        throw ZeroEvidence("bayes_likelihood: the data has zero probability under the prior");
    std::vector<double> lb(likelihood_of_data.size());
    for (std::size_t i = 0; i < lb.size(); ++i) lb[i] = likelihood_of_data[i] / evidence;
    Payoff product = unit_price(Payoff(prior.grid(), std::move(lb)), prior);
    Distribution posterior = implied_view(product, prior);
    return {std::move(posterior), std::move(product)};
}

/// Jeffrey's update under soft evidence on the observation grid:
/// L_J(x) = integral of evidence(y) P(y|x)/P(y) dy.
inline InferenceResult jeffrey_likelihood(const Distribution& prior, const ObservationModel& model,
                                          const Distribution& soft_evidence) {
    require_compatible(prior.grid(), model.x_grid(), "jeffrey_likelihood");
    require_compatible(soft_evidence.grid(), model.y_grid(), "jeffrey_likelihood evidence");
    const auto& wx = prior.grid().weights();
    const auto& wy = model.y_grid().weights();
    const std::size_t nx = prior.size();
    const std::size_t ny = soft_evidence.size();

    std::vector<double> marginal(ny, 0.0);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            marginal[j] += wx[i] * prior[i] * model.kernel()[i][j];

    for (std::size_t j = 0; j < ny; ++j)
        if (soft_evidence[j] > kDensityFloor && marginal[j] < kDensityFloor)
            throw SupportViolation("jeffrey_likelihood: evidence has mass at y = " +
                                   std::to_string(model.y_grid().point(j)) +
                                   " where the prior-predictive vanishes");

    std::vector<double> lj(nx, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < ny; ++j) {
            if (soft_evidence[j] <= kDensityFloor) continue;
            acc += wy[j] * soft_evidence[j] * model.kernel()[i][j] / marginal[j];
        }
        lj[i] = acc;
    }
    Payoff product = unit_price(Payoff(prior.grid(), std::move(lj)), prior);
    Distribution posterior = implied_view(product, prior);
    return {std::move(posterior), std::move(product)};
}

struct CanonicalResult {
    Distribution posterior;
    Payoff product;
    double c = 0.0;  // exponential-tilt multiplier
};

/// Minimum-divergence update under the moment constraint E[g] = target:
/// the canonical likelihood L_C ~ exp(c g) with c solved by a bracketed
/// search on the strictly increasing map c -> E_tilted[g].
inline CanonicalResult canonical_likelihood(const Distribution& prior, std::span<const double> g,
                                            double target) {
    require_size(prior.grid(), g.size(), "canonical_likelihood");
    const std::size_t n = g.size();
    double g_lo = std::numeric_limits<double>::infinity();
    double g_hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (prior[i] > kDensityFloor) {
            g_lo = std::min(g_lo, g[i]);
            g_hi = std::max(g_hi, g[i]);
        }
    }
    if (!(target > g_lo && target < g_hi))
        throw TargetUnreachable("canonical_likelihood: target " + std::to_string(target) +
                                " is not strictly inside the range of g on the prior support");

    const std::vector<double> log_prior = safe_log(prior.density(), prior.grid(),
                                                   "canonical_likelihood prior");
    const auto tilted = [&](double c) {
        std::vector<double> log_d(n);
        for (std::size_t i = 0; i < n; ++i) log_d[i] = log_prior[i] + c * g[i];
        return normalized_from_log(log_d, prior.grid());
    };
    const double span = g_hi - g_lo;
    const double c_cap = 600.0 / std::max(span, 1e-12);
    const auto h = [&](double c) { return expectation(tilted(c), g) - target; };
    const auto root = solve_increasing(h, 0.0, 1.0, -c_cap, c_cap, 1e-15, 1e-11);
    if (!root)
        throw TargetUnreachable("canonical_likelihood: tilt multiplier exceeded the exponent cap");

    const double c = root->x;
    Distribution posterior = tilted(c);
    std::vector<double> ratio(n);
    for (std::size_t i = 0; i < n; ++i)
        ratio[i] = prior[i] > kDensityFloor ? posterior[i] / prior[i] : 0.0;
    Payoff product = unit_price(Payoff(prior.grid(), std::move(ratio)), prior);
    return {implied_view(product, prior), std::move(product), c};
}

}  // namespace infogeo
