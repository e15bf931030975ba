// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace infogeo {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
};

namespace detail {

/// Brent's method on a sign-changing bracket. Falls back to bisection
/// whenever an interpolated step misbehaves or produces non-finite values.
template <class F>
RootResult brent(F&& f, double a, double b, double fa, double fb, double x_tol, double f_tol,
                 int max_iter = 200) {
    if (std::abs(fa) <= f_tol) return {a, fa, 0};
    if (std::abs(fb) <= f_tol) return {b, fb, 0};

    double c = a, fc = fa;
    double d = b - a, e = d;
    int it = 0;
    for (; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * x_tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || std::abs(fb) <= f_tol) break;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb) && std::isfinite(fa) &&
            std::isfinite(fb) && std::isfinite(fc)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return {b, fb, it};
}

}  // namespace detail

/// Root of a monotonically increasing map on the open interval
/// (lo_bound, hi_bound). Brackets by geometric expansion from x0 and
/// polishes with Brent. Returns nullopt when no sign change exists inside
/// the bounds (the target is unreachable).
template <class F>
std::optional<RootResult> solve_increasing(F&& f, double x0, double initial_step, double lo_bound,
                                           double hi_bound, double x_tol, double f_tol,
                                           int max_expand = 200) {
    const double lo_edge =
        std::isfinite(lo_bound) ? lo_bound + 1e-12 * (1.0 + std::abs(lo_bound)) : lo_bound;
    const double hi_edge =
        std::isfinite(hi_bound) ? hi_bound - 1e-12 * (1.0 + std::abs(hi_bound)) : hi_bound;
    const auto clamp_in = [&](double x) { return std::clamp(x, lo_edge, hi_edge); };

    double a = clamp_in(x0);
    double fa = f(a);
    int evals = 1;
    if (std::abs(fa) <= f_tol) return RootResult{a, fa, evals};

    const double dir = fa < 0.0 ? 1.0 : -1.0;  // move uphill toward the root
    double step = std::abs(initial_step) * dir;
    double b = a, fb = fa;
    bool bracketed = false;
    for (int k = 0; k < max_expand; ++k) {
        double next = clamp_in(b + step);
        if (next == b) break;  // pinned against a bound
        const double fn = f(next);
        ++evals;
        if (std::abs(fn) <= f_tol) return RootResult{next, fn, evals};
        if ((fn > 0.0) != (fa > 0.0)) {
            a = b; fa = fb;
            b = next; fb = fn;
            bracketed = true;
            break;
        }
        b = next;
        fb = fn;
        step *= 2.0;
    }
    if (!bracketed) return std::nullopt;

    RootResult r = detail::brent(f, a, b, fa, fb, x_tol, f_tol);
    r.iterations += evals;
    return r;
}

}  // namespace infogeo
