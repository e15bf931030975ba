// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infogeo/distribution.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/payoff.hpp"
#include "infogeo/phi.hpp"
#include "infogeo/products.hpp"
#include "infogeo/risk.hpp"
#include "infogeo/root_finding.hpp"

namespace infogeo {

/// Largest |t| * max|ln S| allowed when extrapolating exponential
/// geodesics, keeping every exponent comfortably representable.
inline constexpr double kExponentBudget = 200.0;

/// Mixture-family line (1-t) m + t beta. Financially: proportional
/// liquidation of the portfolio into cash.
inline Distribution m_geodesic(const Distribution& m, const Distribution& beta, double t) {
    require_compatible(m.grid(), beta.grid(), "m_geodesic");
    if (!(t >= 0.0 && t <= 1.0))
        throw InvalidRange("m_geodesic: t must lie in [0,1]");
    std::vector<double> d(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) d[i] = (1.0 - t) * m[i] + t * beta[i];
    return normalize(d, m.grid());
}

/// Exponential-family line with density proportional to m^(1-t) beta_s^t.
/// Financially: scaling risk aversion on the scenario product. Extrapolation
/// beyond [0,1] is allowed within the exponent budget.
inline Distribution e_geodesic(const Distribution& m, const Distribution& beta_s, double t,
                               double exponent_budget = kExponentBudget) {
    require_compatible(m.grid(), beta_s.grid(), "e_geodesic");
    const std::vector<double> log_m = safe_log(m.density(), m.grid(), "e_geodesic m");
    const std::vector<double> log_b = safe_log(beta_s.density(), m.grid(), "e_geodesic beta_s");
    double max_step = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
        max_step = std::max(max_step, std::abs(log_b[i] - log_m[i]));
    if (std::abs(t) * max_step > exponent_budget)
        throw OverflowRisk("e_geodesic: |t| * max|ln(beta_s/m)| = " +
                           std::to_string(std::abs(t) * max_step) + " exceeds the exponent budget");
    std::vector<double> log_d(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        log_d[i] = log_m[i] + t * (log_b[i] - log_m[i]);
    return normalized_from_log(log_d, m.grid());
}

enum class GeodesicKind { Mixture, Exponential };

/// A parametrized geodesic between two distributions. evaluate(0) and
/// evaluate(1) reproduce the endpoints.
class Geodesic {
public:
    static Geodesic mixture(Distribution a, Distribution b) {
        require_compatible(a.grid(), b.grid(), "Geodesic::mixture");
        return Geodesic(GeodesicKind::Mixture, std::move(a), std::move(b), 0.0, 1.0);
    }

    static Geodesic exponential(Distribution a, Distribution b,
                                double exponent_budget = kExponentBudget) {
        require_compatible(a.grid(), b.grid(), "Geodesic::exponential");
        const std::vector<double> la = safe_log(a.density(), a.grid(), "Geodesic endpoint a");
        const std::vector<double> lb = safe_log(b.density(), a.grid(), "Geodesic endpoint b");
        double max_step = 0.0;
        for (std::size_t i = 0; i < la.size(); ++i)
            max_step = std::max(max_step, std::abs(lb[i] - la[i]));
        const double reach = max_step > 0.0 ? exponent_budget / max_step
                                            : std::numeric_limits<double>::infinity();
        return Geodesic(GeodesicKind::Exponential, std::move(a), std::move(b), -reach, reach);
    }

    GeodesicKind kind() const { return kind_; }
    const Distribution& endpoint_a() const { return a_; }
    const Distribution& endpoint_b() const { return b_; }
    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }

    Distribution evaluate(double t) const {
        if (kind_ == GeodesicKind::Mixture) return m_geodesic(a_, b_, t);
        if (!(t >= t_min_ && t <= t_max_))
            throw OverflowRisk("Geodesic::evaluate: t outside the clamp range");
        return e_geodesic(a_, b_, t);
    }

private:
    Geodesic(GeodesicKind k, Distribution a, Distribution b, double tmin, double tmax)
        : kind_(k), a_(std::move(a)), b_(std::move(b)), t_min_(tmin), t_max_(tmax) {}

    GeodesicKind kind_;
    Distribution a_;
    Distribution b_;
    double t_min_, t_max_;
};

/// Mixture and exponential tangent vectors at a common base point.
struct TangentPair {
    std::vector<double> bra;  // toward_mix - base
    std::vector<double> ket;  // ln toward_exp - ln base
};

inline TangentPair tangent_pair(const Distribution& base, const Distribution& toward_mix,
                                const Distribution& toward_exp) {
    require_compatible(base.grid(), toward_mix.grid(), "tangent_pair");
    require_compatible(base.grid(), toward_exp.grid(), "tangent_pair");
    TangentPair tp;
    tp.bra.resize(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) tp.bra[i] = toward_mix[i] - base[i];
    const std::vector<double> log_base = safe_log(base.density(), base.grid(), "tangent_pair base");
    const std::vector<double> log_exp =
        safe_log(toward_exp.density(), base.grid(), "tangent_pair toward_exp");
    tp.ket.resize(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) tp.ket[i] = log_exp[i] - log_base[i];
    return tp;
}

inline double scalar_product(const TangentPair& tp, const Grid& grid) {
    require_size(grid, tp.bra.size(), "scalar_product");
    require_size(grid, tp.ket.size(), "scalar_product");
    double acc = 0.0;
    for (std::size_t i = 0; i < tp.bra.size(); ++i)
        acc += grid.weight(i) * tp.bra[i] * tp.ket[i];
    return acc;
}

/// A required exposure: Risk_S[beta] = target, with S held at unit price.
class RiskConstraint {
public:
    RiskConstraint(const Payoff& scenario, const Distribution& m, double target)
        : scenario_(unit_price(scenario, m)), target_(target) {
        // unit_price validated grid compatibility; logs validate positivity
        log_scenario_ = safe_log(scenario_.values(), scenario_.grid(), "RiskConstraint scenario");
    }

    const Payoff& scenario() const { return scenario_; }
    const std::vector<double>& log_scenario() const { return log_scenario_; }
    double target() const { return target_; }

private:
    Payoff scenario_;
    std::vector<double> log_scenario_;
    double target_;
};

struct GeodesicRiskPoint {
    double risk = 0.0;
    double variance_at_t = 0.0;  // equals d(risk)/dt
};

namespace detail {

/// beta_t on the extrapolated e-geodesic from m toward the scenario view,
/// expressed with the scenario log-payoff directly: beta_t ~ m S^t.
inline Distribution e_point_from_log_scenario(const Distribution& m,
                                              const std::vector<double>& log_s, double t) {
    double max_abs = 0.0;
    for (double v : log_s) max_abs = std::max(max_abs, std::abs(v));
    if (std::abs(t) * max_abs > kExponentBudget)
        throw OverflowRisk("e-geodesic point: |t| * max|ln S| exceeds the exponent budget");
    const std::vector<double> log_m = safe_log(m.density(), m.grid(), "e-geodesic base");
    std::vector<double> log_d(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) log_d[i] = log_m[i] + t * log_s[i];
    return normalized_from_log(log_d, m.grid());
}

inline double risk_against(const Distribution& beta, const Distribution& m,
                           const std::vector<double>& log_s) {
    const auto& w = m.grid().weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) acc += w[i] * (beta[i] - m[i]) * log_s[i];
    return acc;
}

}  // namespace detail

/// Exposure and its growth rate at parameter t on the e-geodesic of S.
inline GeodesicRiskPoint risk_along_geodesic(const Distribution& m, const Payoff& S, double t) {
    const Payoff s = unit_price(S, m);
    const std::vector<double> log_s = safe_log(s.values(), s.grid(), "risk_along_geodesic");
    const Distribution beta_t = detail::e_point_from_log_scenario(m, log_s, t);
    GeodesicRiskPoint out;
    out.risk = detail::risk_against(beta_t, m, log_s);
    out.variance_at_t = variance(beta_t, log_s);
    return out;
}

struct IsoRiskProjection {
    Distribution beta;
    double t_star = 0.0;
};

/// The e-projection of m onto the iso-risk manifold Risk_S = target:
/// the unique point of the (extrapolated) e-geodesic with that exposure.
inline IsoRiskProjection e_project_iso_risk(const Distribution& m, const RiskConstraint& constraint) {
    const std::vector<double>& log_s = constraint.log_scenario();
    const double r = constraint.target();

    double max_abs = 0.0, min_v = log_s[0], max_v = log_s[0];
    for (double v : log_s) {
        max_abs = std::max(max_abs, std::abs(v));
        min_v = std::min(min_v, v);
        max_v = std::max(max_v, v);
    }
    if (max_v - min_v < 1e-13) {
        if (std::abs(r) > 1e-12)
            throw Infeasible("e_project_iso_risk: scenario is constant; only zero risk is achievable");
        return {m, 0.0};
    }
    if (r == 0.0) return {m, 0.0};

    const double t_clamp = kExponentBudget / max_abs;
    const auto g = [&](double t) {
        return detail::risk_against(detail::e_point_from_log_scenario(m, log_s, t), m, log_s) - r;
    };
    const auto root = solve_increasing(g, 0.0, std::min(8.0, 0.5 * t_clamp), -t_clamp, t_clamp,
                                       1e-13, 1e-10);
    if (!root)
        throw TargetUnreachable("e_project_iso_risk: target risk " + std::to_string(r) +
                                " is outside the achievable range on the clamped geodesic");
    return {detail::e_point_from_log_scenario(m, log_s, root->x), root->x};
}

/// Result of a multi-constraint projection: the optimal view, the payoff
/// implementing it, multipliers, residuals, and iteration diagnostics.
struct SolverResult {
    Distribution beta;
    Payoff payoff;
    std::vector<double> multipliers;
    std::vector<double> residuals;
    double objective = 0.0;  // D(beta || m)
    int iterations = 0;
};

namespace detail {

/// Cholesky solve of a small SPD system; returns false when the matrix is
/// not positive definite at working precision.
inline bool cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t k,
                           std::vector<double>& out) {
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i * k + j];
            for (std::size_t p = 0; p < j; ++p) s -= a[i * k + p] * a[j * k + p];
            if (i == j) {
                if (!(s > 0.0)) return false;
                a[i * k + i] = std::sqrt(s);
            } else {
                a[i * k + j] = s / a[j * k + j];
            }
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        double s = b[i];
        for (std::size_t p = 0; p < i; ++p) s -= a[i * k + p] * b[p];
        b[i] = s / a[i * k + i];
    }
    for (std::size_t ii = k; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t p = ii + 1; p < k; ++p) s -= a[p * k + ii] * b[p];
        b[ii] = s / a[ii * k + ii];
    }
    out = std::move(b);
    return true;
}

}  // namespace detail

/// Divergence-minimizing view subject to several exposure constraints:
/// beta ~ m exp(sum_k mu_k ln S_k). Damped Newton on the smooth strictly
/// convex dual, with a cyclic single-constraint scaling fallback.
inline SolverResult e_project_multi(const Distribution& m,
                                    const std::vector<RiskConstraint>& constraints) {
    if (constraints.empty())
        throw InvalidRange("e_project_multi: need at least one constraint");
    const std::size_t n = m.size();
    const std::size_t k = constraints.size();

    std::vector<const std::vector<double>*> logs(k);
    std::vector<double> targets(k);  // absolute expectation targets for E_beta[ln S_k]
    for (std::size_t j = 0; j < k; ++j) {
        require_compatible(m.grid(), constraints[j].scenario().grid(), "e_project_multi");
        logs[j] = &constraints[j].log_scenario();
        const auto& ls = *logs[j];
        double lo = ls[0], hi = ls[0];
        for (double v : ls) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo < 1e-13 && std::abs(constraints[j].target()) > 1e-12)
            throw Infeasible("e_project_multi: constraint " + std::to_string(j) +
                             " has a constant scenario; only zero risk is achievable");
        targets[j] = constraints[j].target() + expectation(m, ls);
    }

    const std::vector<double> log_m = safe_log(m.density(), m.grid(), "e_project_multi");
    const auto& w = m.grid().weights();

    std::vector<double> mu(k, 0.0);
    std::vector<double> dens(n), resid(k);

    // beta(mu), dual value A(mu) - mu . targets, and the residual vector.
    const auto eval = [&](const std::vector<double>& mu_try, bool& ok) -> double {
        std::vector<double> log_d(n);
        double shift = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            double e = log_m[i];
            for (std::size_t j = 0; j < k; ++j) e += mu_try[j] * (*logs[j])[i];
            log_d[i] = e;
            shift = std::max(shift, e);
        }
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dens[i] = std::exp(log_d[i] - shift);
            z += w[i] * dens[i];
        }
        ok = std::isfinite(z) && z > 0.0;
        if (!ok) return std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) dens[i] /= z;
        for (std::size_t j = 0; j < k; ++j) {
            double e = 0.0;
            for (std::size_t i = 0; i < n; ++i) e += w[i] * dens[i] * (*logs[j])[i];
            resid[j] = e - targets[j];
        }
        double dual = std::log(z) + shift;
        for (std::size_t j = 0; j < k; ++j) dual -= mu_try[j] * targets[j];
        return dual;
    };

    constexpr double tol = 1e-10;
    constexpr int max_newton = 120;
    bool ok = false;
    double dual = eval(mu, ok);
    int iters = 0;

    const auto max_resid = [&]() {
        double v = 0.0;
        for (double r : resid) v = std::max(v, std::abs(r));
        return v;
    };

    for (; iters < max_newton && max_resid() > tol; ++iters) {
        // Hessian of the dual: covariance of the ln S_k under beta(mu).
        std::vector<double> mean(k, 0.0);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < n; ++i) mean[j] += w[i] * dens[i] * (*logs[j])[i];
        std::vector<double> cov(k * k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double wd = w[i] * dens[i];
            for (std::size_t a = 0; a < k; ++a) {
                const double da = (*logs[a])[i] - mean[a];
                for (std::size_t b = a; b < k; ++b)
                    cov[a * k + b] += wd * da * ((*logs[b])[i] - mean[b]);
            }
        }
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < a; ++b) cov[a * k + b] = cov[b * k + a];

        std::vector<double> rhs(k), step;
        for (std::size_t j = 0; j < k; ++j) rhs[j] = -resid[j];
        double ridge = 0.0;
        double trace = 0.0;
        for (std::size_t a = 0; a < k; ++a) trace += cov[a * k + a];
        while (true) {
            std::vector<double> reg = cov;
            for (std::size_t a = 0; a < k; ++a) reg[a * k + a] += ridge;
            if (detail::cholesky_solve(std::move(reg), rhs, k, step)) break;
            ridge = ridge == 0.0 ? 1e-12 * std::max(trace, 1.0) : ridge * 100.0;
            if (ridge > 1e6 * std::max(trace, 1.0))
                throw SingularSystem("e_project_multi: dual Hessian is numerically singular");
        }

        // Backtracking line search on the convex dual.
        double alpha = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
            std::vector<double> mu_try(k);
            for (std::size_t j = 0; j < k; ++j) mu_try[j] = mu[j] + alpha * step[j];
            bool ok_try = false;
            const double dual_try = eval(mu_try, ok_try);
            if (ok_try && dual_try <= dual + 1e-14 * std::abs(dual)) {
                mu = std::move(mu_try);
                dual = dual_try;
                moved = true;
                break;
            }
        }
        if (!moved) break;  // Newton stalled; fall through to cyclic scaling
    }

    // Csiszar-style cyclic scaling fallback: one monotone scalar solve per
    // constraint per sweep.
    if (max_resid() > tol) {
        for (int sweep = 0; sweep < 400 && max_resid() > tol; ++sweep, ++iters) {
            for (std::size_t j = 0; j < k; ++j) {
                const auto g = [&](double mj) {
                    std::vector<double> mu_try = mu;
                    mu_try[j] = mj;
                    bool ok_try = false;
                    eval(mu_try, ok_try);
                    if (!ok_try) return std::numeric_limits<double>::quiet_NaN();
                    return resid[j];
                };
                const auto root = solve_increasing(g, mu[j], 0.5, -1e6, 1e6, 1e-13, 1e-12);
                if (root) mu[j] = root->x;
            }
            dual = eval(mu, ok);
        }
        if (max_resid() > tol)
            throw MaxIterations("e_project_multi: did not reach residual tolerance " +
                                std::to_string(tol));
    }

    eval(mu, ok);
    Distribution beta(m.grid(), dens);
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = beta[i] / m[i];
    SolverResult out{std::move(beta), unit_price(Payoff(m.grid(), std::move(h)), m),
                     std::move(mu), resid, 0.0, iters};
    out.objective = kl_divergence(out.beta, m);
    return out;
}

struct OrthogonalityReport {
    double t_star = 0.0;
    double risk = 0.0;
    double toward_scenario = 0.0;  // <beta_t*, beta_pi | beta_t*, beta_s>
    double toward_market = 0.0;    // <beta_t*, beta_pi | beta_t*, m>
};

/// At the e-projection of m onto the iso-risk surface through beta_pi, the
/// mixture tangent toward beta_pi is orthogonal to the geodesic in both
/// directions. Both scalar products must vanish.
inline OrthogonalityReport orthogonality_check(const Distribution& beta_pi, const Distribution& m,
                                               const Payoff& S) {
    require_compatible(beta_pi.grid(), m.grid(), "orthogonality_check");
    const Payoff s = unit_price(S, m);
    const std::vector<double> log_s = safe_log(s.values(), s.grid(), "orthogonality_check");

    OrthogonalityReport rep;
    rep.risk = detail::risk_against(beta_pi, m, log_s);
    const auto proj = e_project_iso_risk(m, RiskConstraint(s, m, rep.risk));
    rep.t_star = proj.t_star;

    const Distribution beta_s = implied_view(s, m);
    const std::vector<double> log_t = safe_log(proj.beta.density(), m.grid(), "projection point");
    const std::vector<double> log_bs = safe_log(beta_s.density(), m.grid(), "scenario view");
    const std::vector<double> log_mv = safe_log(m.density(), m.grid(), "market view");
    const auto& w = m.grid().weights();
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double bra = beta_pi[i] - proj.beta[i];
        rep.toward_scenario += w[i] * bra * (log_bs[i] - log_t[i]);
        rep.toward_market += w[i] * bra * (log_mv[i] - log_t[i]);
    }
    return rep;
}

}  // namespace infogeo
