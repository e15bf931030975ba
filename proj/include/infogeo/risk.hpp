// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "infogeo/distribution.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/market.hpp"
#include "infogeo/payoff.hpp"
#include "infogeo/products.hpp"

namespace infogeo {

enum class RiskAngle { Acute, Right, Obtuse };

inline constexpr double kAngleTol = 1e-9;

inline RiskAngle classify_angle(double risk, double tol = kAngleTol) {
    if (risk > tol) return RiskAngle::Acute;
    if (risk < -tol) return RiskAngle::Obtuse;
    return RiskAngle::Right;
}

inline const char* to_string(RiskAngle a) {
    switch (a) {
        case RiskAngle::Acute: return "acute";
        case RiskAngle::Right: return "right";
        case RiskAngle::Obtuse: return "obtuse";
    }
    return "?";
}

/// Specific risk of a triangle of views, computed three equivalent ways.
/// The three values come from genuinely separate computations (return
/// spread, divergence triangle, tangent scalar product) so their agreement
/// is a live cross-check of the engine.
struct RiskReport {
    double risk_spread = 0.0;    // spread in expected log-returns
    double risk_triangle = 0.0;  // D(b_pi||m) + D(m||b_s) - D(b_pi||b_s)
    double risk_scalar = 0.0;    // <m,b_pi | m,b_s>
    double d_pi_m = 0.0;
    double d_m_s = 0.0;
    double d_pi_s = 0.0;
    RiskAngle angle = RiskAngle::Right;
};

/// Specific risk of portfolio Pi against scenario product S: the spread
/// between the portfolio-implied and market-implied expected log-return
/// on S. Invariant to the notionals of both Pi and S.
inline double specific_risk(const Payoff& Pi, const Payoff& S, const Distribution& m) {
    require_compatible(Pi.grid(), m.grid(), "specific_risk");
    require_compatible(S.grid(), m.grid(), "specific_risk");
    const std::vector<double> log_s = safe_log(S.values(), S.grid(), "specific_risk scenario");
    const Distribution beta_pi = implied_view(Pi, m);
    return expectation(beta_pi, log_s) - expectation(m, log_s);
}

/// Scalar product of the mixture tangent (beta_pi - m) with the exponential
/// tangent (ln beta_s - ln m).
inline double risk_scalar_product(const Distribution& beta_pi, const Distribution& m,
                                  const Distribution& beta_s) {
    require_compatible(beta_pi.grid(), m.grid(), "risk_scalar_product");
    require_compatible(beta_s.grid(), m.grid(), "risk_scalar_product");
    const auto& w = m.grid().weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!(beta_s[i] > kDensityFloor) || !(m[i] > kDensityFloor))
            throw SupportViolation("risk_scalar_product: log tangent needs strictly positive densities");
        acc += w[i] * (beta_pi[i] - m[i]) * (std::log(beta_s[i]) - std::log(m[i]));
    }
    return acc;
}

/// Full triangle report for the views (beta_pi, m, beta_s).
inline RiskReport risk_triangle(const Distribution& beta_pi, const Distribution& m,
                                const Distribution& beta_s) {
    require_compatible(beta_pi.grid(), m.grid(), "risk_triangle");
    require_compatible(beta_s.grid(), m.grid(), "risk_triangle");

    RiskReport r;
    r.d_pi_m = kl_divergence(beta_pi, m);
    r.d_m_s = kl_divergence(m, beta_s);
    r.d_pi_s = kl_divergence(beta_pi, beta_s);
    r.risk_triangle = r.d_pi_m + r.d_m_s - r.d_pi_s;

    // Return-spread route: E_{b_pi}[ln(b_s/m)] - E_m[ln(b_s/m)].
    {
        const auto& w = m.grid().weights();
        double e_pi = 0.0, e_m = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!(beta_s[i] > kDensityFloor) || !(m[i] > kDensityFloor))
                throw SupportViolation("risk_triangle: spread route needs strictly positive m, beta_s");
            const double lr = std::log(beta_s[i]) - std::log(m[i]);
            e_pi += w[i] * beta_pi[i] * lr;
            e_m += w[i] * m[i] * lr;
        }
        r.risk_spread = e_pi - e_m;
    }

    r.risk_scalar = risk_scalar_product(beta_pi, m, beta_s);
    r.angle = classify_angle(r.risk_spread);
    return r;
}

struct SensitivityCheck {
    double fd = 0.0;      // central difference of ln Price in sigma
    double spread = 0.0;  // specific risk against the score product
};

/// Cross-check of the sensitivity-as-spread identity: the log-price bump
/// sensitivity must match the specific risk against the score product to
/// O(bump^2).
inline SensitivityCheck sensitivity_check(const MarketFamily& family, const Grid& grid,
                                          const Payoff& Pi, double sigma, double bump) {
    if (!(bump > 0.0)) throw FamilyEvaluationError("sensitivity_check: bump must be positive");
    const Distribution base = family.density_at(grid, sigma);
    const Distribution up = family.density_at(grid, sigma + bump);
    const Distribution dn = family.density_at(grid, sigma - bump);

    SensitivityCheck out;
    out.fd = (std::log(price(Pi, up)) - std::log(price(Pi, dn))) / (2.0 * bump);
    out.spread = specific_risk(Pi, score_product(family, grid, sigma, bump), base);
    return out;
}

}  // namespace infogeo
