// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "infogeo/distribution.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/geometry.hpp"
#include "infogeo/hedging.hpp"
#include "infogeo/payoff.hpp"
#include "infogeo/phi.hpp"
#include "infogeo/products.hpp"
#include "infogeo/risk.hpp"
#include "infogeo/root_finding.hpp"
#include "infogeo/utility.hpp"

namespace infogeo {

namespace detail {

/// Pointwise likelihood ratio b/m. Zero belief maps to zero; belief without
/// market support is loud.
inline std::vector<double> likelihood_ratio(const Distribution& b, const Distribution& m) {
    require_compatible(b.grid(), m.grid(), "likelihood ratio");
    std::vector<double> f(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] <= kDensityFloor) {
            f[i] = 0.0;
            continue;
        }
        if (m[i] < kDensityFloor)
            throw SupportViolation("likelihood ratio: m vanishes where b has mass");
        f[i] = b[i] / m[i];
    }
    return f;
}

struct BudgetSolve {
    double lambda0 = 0.0;
    std::vector<double> values;
    int iterations = 0;
};

/// Budget multiplier for F = U'^{-1}(lambda0 / f): price is strictly
/// decreasing in lambda0, so a bracketed solve on the reciprocal suffices.
inline BudgetSolve solve_budget(const std::vector<double>& f, const Distribution& m,
                                const Utility& U) {
    const auto& w = m.grid().weights();
    const std::size_t n = f.size();
    std::vector<double> values(n);
    const auto price_of = [&](double lambda0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            values[i] = f[i] > 0.0 ? U.marginal_inverse(lambda0 / f[i]) : 0.0;
            acc += w[i] * m[i] * values[i];
        }
        return acc;
    };
    const auto g = [&](double y) { return 1.0 - price_of(std::exp(y)); };  // increasing in y
    const auto root = solve_increasing(g, 0.0, 0.5, -700.0, 700.0, 1e-14, 1e-12);
    if (!root)
        throw BudgetInfeasible("solve_budget: no positive multiplier reaches unit price");
    BudgetSolve out;
    out.lambda0 = std::exp(root->x);
    price_of(out.lambda0);
    out.values = values;
    out.iterations = root->iterations;
    return out;
}

}  // namespace detail

/// Expected-utility-optimal unit-price product for belief b against market
/// m: F = U'^{-1}(lambda0 / f) with f = b/m.
inline Payoff utility_optimal_product(const Distribution& b, const Distribution& m,
                                      const Utility& U) {
    const std::vector<double> f = detail::likelihood_ratio(b, m);
    auto solved = detail::solve_budget(f, m, U);
    return Payoff(m.grid(), std::move(solved.values));
}

/// Integrates the payoff elasticity equation d ln F / d ln f = 1 / R(F)
/// in state space (F as a function of f), then fixes the constant by unit
/// price. Second-order stepping with adaptive refinement between the ln f
/// nodes induced by the grid.
inline Payoff elasticity_ode_product(const Payoff& f, const std::function<double(double)>& R_of_F,
                                     const Distribution& m) {
    require_compatible(f.grid(), m.grid(), "elasticity_ode_product");
    const std::size_t n = f.size();
    const std::vector<double> log_f = safe_log(f.values(), f.grid(), "elasticity_ode_product");

    // Collapse the grid's ln f values onto a sorted unique axis.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return log_f[a] < log_f[b]; });
    std::vector<double> ys;
    std::vector<std::size_t> node_of(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double y = log_f[order[k]];
        if (ys.empty() || y - ys.back() > 1e-14 * (1.0 + std::abs(y))) ys.push_back(y);
        node_of[order[k]] = ys.size() - 1;
    }
    const std::size_t nn = ys.size();
    if (nn < 2)
        throw DomainViolation("elasticity_ode_product: benchmark payoff is constant");

    const auto slope = [&](double G) {
        const double R = R_of_F(std::exp(G));
        if (!(R > 1e-10))
            throw StiffProfile("elasticity_ode_product: risk aversion fell below 1e-10");
        return 1.0 / R;
    };

    // Heun step over [y, y+h].
    const auto heun = [&](double y0, double h, double G) {
        (void)y0;
        const double k1 = slope(G);
        const double k2 = slope(G + h * k1);
        return G + 0.5 * h * (k1 + k2);
    };

    const auto integrate_interval = [&](double y0, double y1, double G0) {
        const double span = y1 - y0;
        std::size_t steps = 4;
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (int round = 0; round < 16; ++round, steps *= 2) {
            double G = G0;
            const double h = span / static_cast<double>(steps);
            for (std::size_t s = 0; s < steps; ++s) G = heun(y0 + h * s, h, G);
            if (round > 0 && std::abs(G - prev) <= 1e-12 * (1.0 + std::abs(G))) return G;
            prev = G;
        }
        return prev;
    };

    const std::size_t anchor = nn / 2;
    std::vector<double> G(nn);
    const auto profile = [&](double c) {
        G[anchor] = c;
        for (std::size_t k = anchor; k + 1 < nn; ++k)
            G[k + 1] = integrate_interval(ys[k], ys[k + 1], G[k]);
        for (std::size_t k = anchor; k-- > 0;)
            G[k] = integrate_interval(ys[k + 1], ys[k], G[k + 1]);
    };

    const auto& w = m.grid().weights();
    const auto g = [&](double c) {
        profile(c);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += w[i] * m[i] * std::exp(G[node_of[i]]);
        return acc - 1.0;
    };
    const auto root = solve_increasing(g, 0.0, 0.5, -700.0, 700.0, 1e-14, 1e-12);
    if (!root)
        throw BudgetInfeasible("elasticity_ode_product: unit price unreachable");
    profile(root->x);

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = std::exp(G[node_of[i]]);
    return Payoff(m.grid(), std::move(values));
}

/// Risk-constrained optimal product and its modified aversion profile.
struct PartiallyHedgedResult {
    Payoff payoff;
    double nu = 0.0;     // budget multiplier
    double rho = 0.0;    // risk multiplier
    double alpha_r = 0.0;
    std::vector<double> modified_aversion;  // R*(x); NaN on degenerate stencils
    double residual_price = 0.0;
    double residual_risk = 0.0;
    int iterations = 0;
};

/// Maximizes expected utility subject to unit price and a prescribed
/// exposure: the Euler-Lagrange solution is F = U'^{-1}((nu + rho ln S)/f).
/// Newton on the 2-D residual with a nested-bisection fallback.
inline PartiallyHedgedResult partially_hedged_product(const Distribution& b, const Distribution& m,
                                                      const Utility& U, const Payoff& S,
                                                      double target_risk) {
    const std::size_t n = m.size();
    const Payoff s = unit_price(S, m);
    const std::vector<double> log_s = safe_log(s.values(), s.grid(), "partially_hedged scenario");
    const std::vector<double> f = detail::likelihood_ratio(b, m);
    const auto& w = m.grid().weights();

    double e_m_log_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) e_m_log_s += w[i] * m[i] * log_s[i];

    std::vector<double> values(n);
    int iterations = 0;

    // Residuals (price - 1, risk - r); nullopt when nu + rho ln S loses
    // positivity somewhere on the grid.
    const auto residual = [&](double nu, double rho) -> std::optional<std::pair<double, double>> {
        double p = 0.0, pr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double q = nu + rho * log_s[i];
            if (!(q > 0.0)) return std::nullopt;
            values[i] = f[i] > 0.0 ? U.marginal_inverse(q / f[i]) : 0.0;
            if (!std::isfinite(values[i])) return std::nullopt;
            p += w[i] * m[i] * values[i];
            pr += w[i] * m[i] * values[i] * log_s[i];
        }
        if (!(p > 0.0)) return std::nullopt;
        return std::make_pair(p - 1.0, pr / p - e_m_log_s - target_risk);
    };

    const auto budget = detail::solve_budget(f, m, U);
    double nu = budget.lambda0, rho = 0.0;
    auto res = residual(nu, rho);
    if (!res) throw Infeasible("partially_hedged_product: unconstrained start infeasible");

    const auto norm2 = [](const std::pair<double, double>& r) {
        return r.first * r.first + r.second * r.second;
    };

    constexpr double tol = 1e-11;
    bool converged = false;
    for (int it = 0; it < 80; ++it, ++iterations) {
        if (std::abs(res->first) < tol && std::abs(res->second) < tol) {
            converged = true;
            break;
        }
        const double hnu = 1e-7 * (1.0 + std::abs(nu));
        const double hrho = 1e-7 * (1.0 + std::abs(rho));
        const auto r_nu = residual(nu + hnu, rho);
        const auto r_rho = residual(nu, rho + hrho);
        if (!r_nu || !r_rho) break;
        const double j11 = (r_nu->first - res->first) / hnu;
        const double j21 = (r_nu->second - res->second) / hnu;
        const double j12 = (r_rho->first - res->first) / hrho;
        const double j22 = (r_rho->second - res->second) / hrho;
        const double det = j11 * j22 - j12 * j21;
        if (!(std::abs(det) > 1e-300)) break;
        const double dnu = (-res->first * j22 + res->second * j12) / det;
        const double drho = (-j11 * res->second + j21 * res->first) / det;

        bool stepped = false;
        double alpha = 1.0;
        for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
            const auto trial = residual(nu + alpha * dnu, rho + alpha * drho);
            if (trial && norm2(*trial) < norm2(*res)) {
                nu += alpha * dnu;
                rho += alpha * drho;
                res = trial;
                stepped = true;
                break;
            }
        }
        if (!stepped) break;
    }

    if (!converged) {
        // Nested bisection fallback: inner nu for unit price at fixed rho
        // (price decreases in nu), outer rho for the risk target.
        const auto solve_nu = [&](double rho_try) -> std::optional<double> {
            const auto g = [&](double y) {
                const auto r = residual(std::exp(y), rho_try);
                // Positivity of nu + rho ln S fails only on the small-nu
                // side, where the price blows up; keep the map monotone.
                if (!r) return -1e30;
                return -r->first;  // increasing in y
            };
            const auto root = solve_increasing(g, std::log(std::max(nu, 1e-300)), 0.5, -700.0,
                                               700.0, 1e-14, 1e-12);
            if (!root || std::abs(root->fx) > 1e-9) return std::nullopt;
            return std::exp(root->x);
        };
        const auto risk_resid = [&](double rho_try) -> std::optional<double> {
            const auto nu_try = solve_nu(rho_try);
            if (!nu_try) return std::nullopt;
            const auto r = residual(*nu_try, rho_try);
            if (!r) return std::nullopt;
            ++iterations;
            return r->second;
        };

        auto r0 = risk_resid(rho);
        if (!r0) throw Infeasible("partially_hedged_product: no feasible multipliers found");
        double rho_good = rho, g_good = *r0;
        std::optional<double> rho_far;
        double g_far = 0.0;
        // Risk falls as rho grows, so hunt downhill of the residual sign.
        double step = (g_good > 0.0 ? 1.0 : -1.0) * 0.25 * (1.0 + std::abs(rho));
        for (int k = 0; k < 120 && !rho_far; ++k) {
            const double rho_try = rho_good + step;
            const auto g_try = risk_resid(rho_try);
            if (!g_try) {
                step *= 0.5;
                if (std::abs(step) < 1e-13 * (1.0 + std::abs(rho_good))) break;
                continue;
            }
            if ((*g_try > 0.0) != (g_good > 0.0)) {
                rho_far = rho_try;
                g_far = *g_try;
                break;
            }
            rho_good = rho_try;
            g_good = *g_try;
            step *= 2.0;
        }
        if (!rho_far)
            throw Infeasible("partially_hedged_product: risk target unreachable while keeping "
                             "nu + rho ln S positive");
        const auto gf = [&](double rho_try) {
            const auto v = risk_resid(rho_try);
            return v ? *v : std::numeric_limits<double>::quiet_NaN();
        };
        const RootResult root = detail::brent(gf, rho_good, *rho_far, g_good, g_far, 1e-14, tol);
        rho = root.x;
        const auto nu_final = solve_nu(rho);
        if (!nu_final) throw Infeasible("partially_hedged_product: solver left feasible region");
        nu = *nu_final;
        res = residual(nu, rho);
        if (!res || std::abs(res->first) > 1e-9 || std::abs(res->second) > 1e-9)
            throw MaxIterations("partially_hedged_product: residual tolerance not met");
    }

    PartiallyHedgedResult out{Payoff(m.grid(), values), nu, rho, rho / nu, {}, res->first,
                              res->second, iterations};

    // Modified aversion profile R*: same difference stencil as
    // hedge_elasticity so the two sides of the contract agree tightly.
    std::vector<double> corr(n);
    for (std::size_t i = 0; i < n; ++i) corr[i] = std::log1p(out.alpha_r * log_s[i]);
    const std::vector<double> log_f = safe_log(f, m.grid(), "partially_hedged f");
    const std::vector<double> d = detail::log_slope(corr, log_f);
    out.modified_aversion.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double R = U.relative_risk_aversion(out.payoff[i]);
        out.modified_aversion[i] = R / (1.0 - d[i]);
    }
    return out;
}

/// Numerical witness of the hedge-investment duality: the pure hedge built
/// from phi = U(1) - U, scenario S ~ exp(-1/f), and the investment's own
/// exposure reproduces the investment itself.
struct DualityReport {
    Payoff investment;
    Payoff hedge;
    double risk = 0.0;
    double lambda = 0.0;
    double mu = 0.0;
    double max_abs_deviation = 0.0;
};

inline DualityReport duality_check(const Utility& U, const Distribution& b,
                                   const Distribution& m) {
    const std::vector<double> f = detail::likelihood_ratio(b, m);
    double neg_inv_lo = std::numeric_limits<double>::infinity();
    double neg_inv_hi = -std::numeric_limits<double>::infinity();
    for (double fi : f) {
        if (!(fi > 0.0))
            throw DomainViolation("duality_check: f = b/m must be bounded away from zero");
        neg_inv_lo = std::min(neg_inv_lo, -1.0 / fi);
        neg_inv_hi = std::max(neg_inv_hi, -1.0 / fi);
    }
    if (neg_inv_hi - neg_inv_lo > 600.0)
        throw DomainViolation("duality_check: exp(-1/f) spans too many orders of magnitude");

    const Payoff F = utility_optimal_product(b, m, U);

    std::vector<double> s_raw(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) s_raw[i] = std::exp(-1.0 / f[i] - neg_inv_hi);
    const Payoff S = unit_price(Payoff(m.grid(), std::move(s_raw)), m);

    const double r = specific_risk(F, S, m);
    const PhiFunction phi = phi_from_utility(U);
    const HedgeResult hedge = pure_hedge(S, m, phi, r);

    DualityReport rep{F, hedge.payoff, r, hedge.lambda, hedge.mu, 0.0};
    const Payoff fn = unit_price(F, m);
    const Payoff hn = unit_price(hedge.payoff, m);
    for (std::size_t i = 0; i < fn.size(); ++i)
        rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::abs(fn[i] - hn[i]));
    return rep;
}

enum class RecycleDirection { LongScenario, ShortScenario };

inline const char* to_string(RecycleDirection d) {
    return d == RecycleDirection::LongScenario ? "long-scenario" : "short-scenario";
}

/// Term sheet for selling an unwanted exposure as a rational investment:
/// the hedge to sell, the belief and aversion profile of the investor it
/// suits, and the side of the scenario they are taking.
struct RecyclePlan {
    Payoff hedge;
    Distribution implied_belief;
    std::vector<double> implied_risk_aversion;
    RecycleDirection direction;
    double exposure = 0.0;
    double mu = 0.0;
};

inline RecyclePlan recycle(const Payoff& A, const Payoff& S, const Distribution& m,
                           const PhiFunction& phi) {
    const double r = specific_risk(A, S, m);
    if (std::abs(r) < 1e-14)
        throw ZeroExposure("recycle: asset carries no exposure to this scenario");

    const HedgeResult hedge = pure_hedge(S, m, phi, r);
    const RecycleDirection dir =
        r > 0.0 ? RecycleDirection::LongScenario : RecycleDirection::ShortScenario;
    Distribution belief = dir == RecycleDirection::LongScenario
                              ? implied_view(S, m)
                              : implied_view(reciprocal_product(S, m), m);

    std::vector<double> aversion(m.size());
    const double abs_mu = std::abs(hedge.mu);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double h = hedge.payoff[i];
        if (!(h > 0.0))
            throw DomainViolation("recycle: hedge payoff vanishes; elasticity undefined");
        aversion[i] = h * phi.phi2(h) / abs_mu;
        if (!(aversion[i] > 0.0))
            throw DomainViolation("recycle: implied risk aversion not positive");
    }
    return RecyclePlan{hedge.payoff, std::move(belief), std::move(aversion), dir, r, hedge.mu};
}

}  // namespace infogeo
