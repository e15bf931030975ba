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
#include "infogeo/payoff.hpp"
#include "infogeo/phi.hpp"
#include "infogeo/products.hpp"
#include "infogeo/risk.hpp"
#include "infogeo/root_finding.hpp"

namespace infogeo {

enum class CostKind { WeightedQuadratic, WeightedPower };

/// Local convex trading cost C(x, y): zero at y = 0, strictly convex in the
/// traded amount y. The weight vector prices the local move per node.
class CostModel {
public:
    static CostModel weighted_quadratic(std::vector<double> weight) {
        return CostModel(CostKind::WeightedQuadratic, std::move(weight), 2.0);
    }

    static CostModel weighted_power(std::vector<double> weight, double exponent) {
        if (!(exponent > 1.0))
            throw DomainViolation("CostModel: power exponent must exceed 1");
        return CostModel(CostKind::WeightedPower, std::move(weight), exponent);
    }

    CostKind kind() const { return kind_; }
    double exponent() const { return p_; }
    const std::vector<double>& weight() const { return w_; }

    double cost(std::size_t i, double y) const {
        if (kind_ == CostKind::WeightedQuadratic) return 0.5 * w_[i] * y * y;
        return w_[i] * std::pow(std::abs(y), p_) / p_;
    }

    double marginal(std::size_t i, double y) const {
        if (kind_ == CostKind::WeightedQuadratic) return w_[i] * y;
        const double mag = w_[i] * std::pow(std::abs(y), p_ - 1.0);
        return y >= 0.0 ? mag : -mag;
    }

    double marginal_inverse(std::size_t i, double v) const {
        if (kind_ == CostKind::WeightedQuadratic) return v / w_[i];
        const double mag = std::pow(std::abs(v) / w_[i], 1.0 / (p_ - 1.0));
        return v >= 0.0 ? mag : -mag;
    }

    double total(const Grid& grid, std::span<const double> delta) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < delta.size(); ++i) acc += grid.weight(i) * cost(i, delta[i]);
        return acc;
    }

private:
    CostModel(CostKind k, std::vector<double> w, double p) : kind_(k), w_(std::move(w)), p_(p) {
        for (double x : w_)
            if (!(x > 0.0)) throw DomainViolation("CostModel: weights must be strictly positive");
    }

    CostKind kind_;
    std::vector<double> w_;
    double p_;
};

struct HedgeResult {
    Payoff payoff;
    double lambda = 0.0;
    double mu = 0.0;
    double residual_price = 0.0;
    double residual_risk = 0.0;
    int iterations = 0;
};

namespace detail {

inline std::string violation_range(const Grid& grid, const std::vector<std::size_t>& idx) {
    return "x in [" + std::to_string(grid.point(idx.front())) + ", " +
           std::to_string(grid.point(idx.back())) + "] (" + std::to_string(idx.size()) + " nodes)";
}

}  // namespace detail

/// Cost-optimal move of the portfolio view onto the zero-risk surface.
/// The adjustment has the Euler-Lagrange form
///   beta' - beta = C2'^{-1}(x, lambda + mu ln S),
/// a per-x monotone image of S. Weighted-quadratic costs reduce to a
/// closed-form 2x2 linear system; power costs use nested monotone solves.
inline HedgeResult c_projection(const Payoff& Pi, const Payoff& S, const Distribution& m,
                                const CostModel& cost) {
    require_compatible(Pi.grid(), m.grid(), "c_projection");
    require_compatible(S.grid(), m.grid(), "c_projection");
    const std::size_t n = m.size();
    if (cost.weight().size() != n)
        throw GridMismatch("c_projection: cost weight length does not match grid");

    const Payoff s = unit_price(S, m);
    const std::vector<double> log_s = safe_log(s.values(), s.grid(), "c_projection scenario");
    const Distribution beta_pi = implied_view(Pi, m);
    const auto& w = m.grid().weights();

    double ls_lo = log_s[0], ls_hi = log_s[0];
    for (double v : log_s) {
        ls_lo = std::min(ls_lo, v);
        ls_hi = std::max(ls_hi, v);
    }
    if (ls_hi - ls_lo < 1e-13)
        throw SingularSystem("c_projection: constant scenario product leaves the system singular");

    double risk0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) risk0 += w[i] * (beta_pi[i] - m[i]) * log_s[i];

    double lambda = 0.0, mu = 0.0;
    int iterations = 0;
    std::vector<double> delta(n, 0.0);

    const auto fill_delta = [&](double l, double u) {
        for (std::size_t i = 0; i < n; ++i) delta[i] = cost.marginal_inverse(i, l + u * log_s[i]);
    };

    if (cost.kind() == CostKind::WeightedQuadratic) {
        double a11 = 0.0, a12 = 0.0, a22 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double q = w[i] / cost.weight()[i];
            a11 += q;
            a12 += q * log_s[i];
            a22 += q * log_s[i] * log_s[i];
        }
        const double det = a11 * a22 - a12 * a12;
        if (!(det > 0.0))
            throw SingularSystem("c_projection: quadratic multiplier system is singular");
        lambda = a12 * risk0 / det;
        mu = -a11 * risk0 / det;
        fill_delta(lambda, mu);
        iterations = 1;
    } else {
        // Inner: lambda matching the zero net-move constraint at fixed mu.
        const auto solve_lambda = [&](double u) -> std::optional<RootResult> {
            const auto g = [&](double l) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    acc += w[i] * cost.marginal_inverse(i, l + u * log_s[i]);
                return acc;
            };
            return solve_increasing(g, 0.0, 0.25,
                                    -std::numeric_limits<double>::infinity(),
                                    std::numeric_limits<double>::infinity(), 1e-14, 1e-13);
        };
        // Outer: mu matching the risk-removal constraint.
        const auto g_outer = [&](double u) {
            const auto inner = solve_lambda(u);
            if (!inner)
                throw Infeasible("c_projection: inner price constraint unsolvable");
            iterations += inner->iterations;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                acc += w[i] * cost.marginal_inverse(i, inner->x + u * log_s[i]) * log_s[i];
            return acc + risk0;
        };
        const auto outer = solve_increasing(g_outer, 0.0, 0.5,
                                            -std::numeric_limits<double>::infinity(),
                                            std::numeric_limits<double>::infinity(), 1e-14, 1e-12);
        if (!outer)
            throw Infeasible("c_projection: risk constraint unreachable under this cost model");
        mu = outer->x;
        const auto inner = solve_lambda(mu);
        if (!inner) throw Infeasible("c_projection: inner price constraint unsolvable");
        lambda = inner->x;
        iterations += outer->iterations;
        fill_delta(lambda, mu);
    }

    std::vector<double> beta_new(n);
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < n; ++i) {
        beta_new[i] = beta_pi[i] + delta[i];
        if (beta_new[i] < 0.0) bad.push_back(i);
    }
    if (!bad.empty())
        throw NegativeDensity("c_projection: hedged view dips below zero on " +
                              detail::violation_range(m.grid(), bad) +
                              "; the unconstrained optimum requires shorting there");

    std::vector<double> pay(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(m[i] > kDensityFloor))
            throw SupportViolation("c_projection: market density vanishes on the grid");
        pay[i] = beta_new[i] / m[i];
    }
    Payoff hedged(m.grid(), std::move(pay));
    HedgeResult out{std::move(hedged), lambda, mu, 0.0, 0.0, std::max(iterations, 1)};
    out.residual_price = price(out.payoff, m) - 1.0;
    out.residual_risk = specific_risk(out.payoff, s, m);
    return out;
}

/// Optimal pure hedging product H = phi'^{-1}(lambda + mu ln S): the
/// unit-price payoff with prescribed exposure that expresses as little view
/// as the divergence D_phi can measure. Nested bracketed root finding; both
/// maps are monotone, so bracketing is robust.
inline HedgeResult pure_hedge(const Payoff& S, const Distribution& m, const PhiFunction& phi,
                              double target_risk) {
    require_compatible(S.grid(), m.grid(), "pure_hedge");
    const std::size_t n = m.size();
    const Payoff s = unit_price(S, m);
    const std::vector<double> log_s = safe_log(s.values(), s.grid(), "pure_hedge scenario");
    const auto& w = m.grid().weights();

    double ls_lo = log_s[0], ls_hi = log_s[0];
    for (double v : log_s) {
        ls_lo = std::min(ls_lo, v);
        ls_hi = std::max(ls_hi, v);
    }
    double e_m_log_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) e_m_log_s += w[i] * m[i] * log_s[i];

    const auto finish = [&](double lambda, double mu, int iterations) {
        std::vector<double> h(n);
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i < n; ++i) {
            h[i] = phi.derivative_inverse(lambda + mu * log_s[i]);
            if (!(h[i] >= 0.0)) bad.push_back(i);
        }
        if (!bad.empty())
            throw DomainViolation("pure_hedge: phi'^{-1} leaves the nonnegative payoff region on " +
                                  detail::violation_range(m.grid(), bad));
        Payoff payoff(m.grid(), std::move(h));
        HedgeResult out{std::move(payoff), lambda, mu, 0.0, 0.0, iterations};
        out.residual_price = price(out.payoff, m) - 1.0;
        out.residual_risk = specific_risk(out.payoff, s, m) - target_risk;
        return out;
    };

    if (target_risk == 0.0) return finish(phi.derivative(1.0), 0.0, 0);

    if (ls_hi - ls_lo < 1e-13)
        throw TargetUnreachable("pure_hedge: constant scenario can only deliver zero risk");
    // Any nonnegative unit-price payoff keeps the spread inside the open
    // interval (min ln S - E_m[ln S], max ln S - E_m[ln S]).
    if (!(target_risk > ls_lo - e_m_log_s && target_risk < ls_hi - e_m_log_s))
        throw TargetUnreachable("pure_hedge: requested risk " + std::to_string(target_risk) +
                                " lies outside the attainable spread range");

    int iterations = 0;

    // Inner solve: lambda making price(H) = 1 at fixed mu, within the open
    // interval where phi'^{-1} stays defined at every node.
    const auto solve_lambda = [&](double mu) -> std::optional<double> {
        double a_lo = std::min(mu * ls_lo, mu * ls_hi);
        double a_hi = std::max(mu * ls_lo, mu * ls_hi);
        const double lam_lo = phi.derivative_lo - a_lo;
        const double lam_hi = phi.derivative_hi - a_hi;
        if (lam_lo >= lam_hi) return std::nullopt;
        const auto g = [&](double l) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                acc += w[i] * m[i] * phi.derivative_inverse(l + mu * log_s[i]);
            return acc - 1.0;
        };
        double x0 = phi.derivative(1.0) - mu * e_m_log_s;
        const auto root = solve_increasing(g, x0, 0.25 * (1.0 + std::abs(x0)), lam_lo, lam_hi,
                                           1e-14, 1e-12);
        if (!root) return std::nullopt;
        iterations += root->iterations;
        return root->x;
    };

    const auto risk_at = [&](double mu, double lambda) {
        double p = 0.0, pr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double hi = phi.derivative_inverse(lambda + mu * log_s[i]);
            p += w[i] * m[i] * hi;
            pr += w[i] * m[i] * hi * log_s[i];
        }
        return pr / p - e_m_log_s;
    };

    // Outer hunt for mu: expand from zero toward the sign of the target,
    // backing off when the inner solve hits a feasibility wall.
    const double max_abs_ls = std::max(std::abs(ls_lo), std::abs(ls_hi));
    const double mu_cap = 4.0 * 200.0 / max_abs_ls;
    const double dir = target_risk > 0.0 ? 1.0 : -1.0;

    double mu_good = 0.0;
    double g_good = -target_risk;
    const double var_m = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = log_s[i] - e_m_log_s;
            acc += w[i] * m[i] * c * c;
        }
        return acc;
    }();
    double step = dir * std::clamp(std::abs(target_risk) / std::max(var_m, 1e-12), 0.125, 4.0);

    std::optional<double> mu_hi;
    double g_hi = 0.0;
    for (int k = 0; k < 240; ++k) {
        double mu_try = mu_good + step;
        if (std::abs(mu_try) > mu_cap) mu_try = dir * mu_cap;
        const auto lam = solve_lambda(mu_try);
        if (!lam) {
            step *= 0.5;
            if (std::abs(step) < 1e-12 * (1.0 + std::abs(mu_good))) break;
            continue;
        }
        const double g_try = risk_at(mu_try, *lam) - target_risk;
        ++iterations;
        if ((g_try > 0.0) != (g_good > 0.0)) {
            mu_hi = mu_try;
            g_hi = g_try;
            break;
        }
        mu_good = mu_try;
        g_good = g_try;
        if (std::abs(mu_good) >= mu_cap) break;
        step *= 2.0;
    }
    if (!mu_hi)
        throw TargetUnreachable("pure_hedge: requested risk " + std::to_string(target_risk) +
                                " is not reachable for phi family '" + phi.name + "'");

    const auto g_of_mu = [&](double mu) {
        const auto lam = solve_lambda(mu);
        if (!lam) return std::numeric_limits<double>::quiet_NaN();
        ++iterations;
        return risk_at(mu, *lam) - target_risk;
    };
    const RootResult root =
        detail::brent(g_of_mu, mu_good, *mu_hi, g_good, g_hi, 1e-14, 1e-11);
    const double mu_star = root.x;
    const auto lam_star = solve_lambda(mu_star);
    if (!lam_star)
        throw TargetUnreachable("pure_hedge: converged multiplier left the feasible region");
    return finish(*lam_star, mu_star, iterations + root.iterations);
}

namespace detail {

/// Centered log-slope d a / d b along the grid; one-sided at the ends.
/// Degenerate stencils (no variation in b) yield NaN.
inline std::vector<double> log_slope(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
    std::size_t defined = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? i : i + 1;
        const double db = b[hi] - b[lo];
        if (std::abs(db) < 1e-14 * (1.0 + std::abs(b[hi]) + std::abs(b[lo]))) continue;
        out[i] = (a[hi] - a[lo]) / db;
        ++defined;
    }
    if (defined == 0)
        throw DivisionByZero("log_slope: the reference payoff is constant on every stencil");
    return out;
}

}  // namespace detail

/// Pointwise payoff elasticity d ln H / d ln f along the grid. Stencils on
/// which f does not move are reported as NaN rather than guessed.
inline std::vector<double> hedge_elasticity(const Payoff& H, const Payoff& f) {
    require_compatible(H.grid(), f.grid(), "hedge_elasticity");
    const std::vector<double> log_h = safe_log(H.values(), H.grid(), "hedge_elasticity H");
    const std::vector<double> log_f = safe_log(f.values(), f.grid(), "hedge_elasticity f");
    return detail::log_slope(log_h, log_f);
}

}  // namespace infogeo
