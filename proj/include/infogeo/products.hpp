// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "infogeo/distribution.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/market.hpp"
#include "infogeo/payoff.hpp"

namespace infogeo {

/// Price[F] = sum w F m. Cash prices at one under a normalized measure.
inline double price(const Payoff& F, const Distribution& m) {
    require_compatible(F.grid(), m.grid(), "price");
    const auto& w = F.grid().weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) acc += w[i] * F[i] * m[i];
    if (!(acc > 0.0)) throw ZeroPrice("price: payoff has nonpositive price under m");
    return acc;
}

/// Rescales a payoff to unit price under m.
inline Payoff unit_price(const Payoff& F, const Distribution& m) {
    const double p = price(F, m);
    std::vector<double> v(F.values());
    for (double& x : v) x /= p;
    return Payoff(F.grid(), std::move(v));
}

/// The growth-optimal view expressed by holding F: beta_F = F m / Price[F].
inline Distribution implied_view(const Payoff& F, const Distribution& m) {
    require_compatible(F.grid(), m.grid(), "implied_view");
    const double p = price(F, m);
    std::vector<double> d(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) d[i] = F[i] * m[i] / p;
    return normalize(d, F.grid());
}

/// The payoff implementing the view b against market m: f = b/m at unit
/// price. Inverse of implied_view up to notional.
inline Payoff likelihood_product(const Distribution& b, const Distribution& m) {
    require_compatible(b.grid(), m.grid(), "likelihood_product");
    std::vector<double> v(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] <= kDensityFloor) {
            v[i] = 0.0;
            continue;
        }
        if (m[i] < kDensityFloor)
            throw SupportViolation("likelihood_product: m vanishes at x = " +
                                   std::to_string(b.grid().point(i)) + " where b > 0");
        v[i] = b[i] / m[i];
    }
    return unit_price(Payoff(b.grid(), std::move(v)), m);
}

/// Constant-relative-risk-aversion tempering of a likelihood product:
/// F = f^{1/R} at unit price. R = 1 returns f itself; large R flattens
/// the payoff toward cash.
inline Payoff power_product(const Payoff& f, double R, const Distribution& m) {
    require_compatible(f.grid(), m.grid(), "power_product");
    if (!(R > 0.0)) throw DomainViolation("power_product: R must be positive");
    std::vector<double> logv(f.size());
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] > kDensityFloor))
            throw DomainViolation("power_product: payoff must be strictly positive (zero at x = " +
                                  std::to_string(f.grid().point(i)) + ")");
        logv[i] = std::log(f[i]) / R;
        shift = std::max(shift, logv[i]);
    }
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = std::exp(logv[i] - shift);
    return unit_price(Payoff(f.grid(), std::move(v)), m);
}

/// Unit-price exponential of the sigma-score of the family, with the score
/// realized as a central finite difference of ln m_sigma in sigma.
inline Payoff score_product(const MarketFamily& family, const Grid& grid, double sigma,
                            double bump) {
    if (!(bump > 0.0)) throw FamilyEvaluationError("score_product: bump must be positive");
    const Distribution base = family.density_at(grid, sigma);
    const Distribution up = family.density_at(grid, sigma + bump);
    const Distribution dn = family.density_at(grid, sigma - bump);

    std::vector<double> score(grid.size());
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (up[i] < kDensityFloor || dn[i] < kDensityFloor)
            throw FamilyEvaluationError("score_product: bumped density vanishes on the grid");
        score[i] = (std::log(up[i]) - std::log(dn[i])) / (2.0 * bump);
        shift = std::max(shift, score[i]);
    }
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = std::exp(score[i] - shift);
    return unit_price(Payoff(grid, std::move(v)), base);
}

/// Finite-difference sigma-score itself (zero m-mean up to O(bump^2)).
inline std::vector<double> sigma_score(const MarketFamily& family, const Grid& grid, double sigma,
                                       double bump) {
    const Distribution up = family.density_at(grid, sigma + bump);
    const Distribution dn = family.density_at(grid, sigma - bump);
    std::vector<double> score(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (up[i] < kDensityFloor || dn[i] < kDensityFloor)
            throw FamilyEvaluationError("sigma_score: bumped density vanishes on the grid");
        score[i] = (std::log(up[i]) - std::log(dn[i])) / (2.0 * bump);
    }
    return score;
}

/// Unit-price reciprocal product: exposure to it is the exact negative of
/// exposure to S.
inline Payoff reciprocal_product(const Payoff& S, const Distribution& m) {
    require_compatible(S.grid(), m.grid(), "reciprocal_product");
    std::vector<double> v(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        if (!(S[i] > kDensityFloor))
            throw DomainViolation("reciprocal_product: payoff must be strictly positive");
        v[i] = 1.0 / S[i];
    }
    return unit_price(Payoff(S.grid(), std::move(v)), m);
}

}  // namespace infogeo
