// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "infogeo/distribution.hpp"
#include "infogeo/errors.hpp"

namespace infogeo {

/// A strictly convex divergence generator with phi(1) = 0. The derivative
/// range bounds are used by solvers to keep multiplier searches inside the
/// domain of derivative_inverse.
struct PhiFunction {
    std::string name;
    std::function<double(double)> value;               // phi(u)
    std::function<double(double)> derivative;          // phi'(u)
    std::function<double(double)> derivative_inverse;  // phi'^{-1}(v)
    std::function<double(double)> second_derivative;   // phi''(u); optional
    double domain_lo = 0.0;                            // open interval of valid u
    double domain_hi = std::numeric_limits<double>::infinity();
    double derivative_lo = -std::numeric_limits<double>::infinity();  // open range of phi'
    double derivative_hi = std::numeric_limits<double>::infinity();

    double phi2(double u) const {
        if (second_derivative) return second_derivative(u);
        const double h = 1e-6 * (1.0 + std::abs(u));
        return (derivative(u + h) - derivative(u - h)) / (2.0 * h);
    }
};

inline PhiFunction phi_kl() {
    PhiFunction p;
    p.name = "kl";
    p.value = [](double u) { return u <= 0.0 ? 0.0 : u * std::log(u); };
    p.derivative = [](double u) { return std::log(u) + 1.0; };
    p.derivative_inverse = [](double v) { return std::exp(v - 1.0); };
    p.second_derivative = [](double u) { return 1.0 / u; };
    return p;
}

inline PhiFunction phi_reverse_kl() {
    PhiFunction p;
    p.name = "reverse-kl";
    p.value = [](double u) { return -std::log(u); };
    p.derivative = [](double u) { return -1.0 / u; };
    p.derivative_inverse = [](double v) { return -1.0 / v; };
    p.second_derivative = [](double u) { return 1.0 / (u * u); };
    p.derivative_hi = 0.0;
    return p;
}

/// chi-squared generator (u-1)^2/2. Convex on the whole line, so the pure
/// hedge solve is unconstrained; a negative payoff is reported afterwards
/// rather than prevented here.
inline PhiFunction phi_chi_squared() {
    PhiFunction p;
    p.name = "chi2";
    p.value = [](double u) { return 0.5 * (u - 1.0) * (u - 1.0); };
    p.derivative = [](double u) { return u - 1.0; };
    p.derivative_inverse = [](double v) { return v + 1.0; };
    p.second_derivative = [](double) { return 1.0; };
    p.domain_lo = -std::numeric_limits<double>::infinity();
    return p;
}

/// Alpha family (u^a - a u + a - 1)/(a(a-1)), a not in {0,1}.
inline PhiFunction phi_alpha(double alpha) {
    if (alpha == 0.0 || alpha == 1.0)
        throw DomainViolation("phi_alpha: alpha must avoid {0,1}; use reverse-kl or kl instead");
    PhiFunction p;
    p.name = "alpha";
    const double a = alpha;
    p.value = [a](double u) {
        return (std::pow(u, a) - a * u + a - 1.0) / (a * (a - 1.0));
    };
    p.derivative = [a](double u) { return (std::pow(u, a - 1.0) - 1.0) / (a - 1.0); };
    p.derivative_inverse = [a](double v) {
        return std::pow(1.0 + (a - 1.0) * v, 1.0 / (a - 1.0));
    };
    p.second_derivative = [a](double u) { return std::pow(u, a - 2.0); };
    if (a > 1.0) {
        p.derivative_lo = -1.0 / (a - 1.0);
    } else {
        p.derivative_hi = 1.0 / (1.0 - a);
    }
    return p;
}

/// D_phi(p||q) = sum w q phi(p/q). Zero-mass points of q with zero p mass
/// contribute nothing; ratios outside phi's domain are violations.
inline double phi_divergence(const PhiFunction& phi, const Distribution& p, const Distribution& q) {
    require_compatible(p.grid(), q.grid(), "phi_divergence");
    const auto& w = p.grid().weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double qi = q[i];
        if (w[i] * qi <= 0.0 || qi <= kDensityFloor) {
            if (p[i] > kDensityFloor)
                throw DomainViolation("phi_divergence: p has mass at x = " +
                                      std::to_string(p.grid().point(i)) + " where q vanishes");
            continue;
        }
        const double u = p[i] / qi;
        if (!(u > phi.domain_lo && u < phi.domain_hi) && u != 0.0)
            throw DomainViolation("phi_divergence: ratio " + std::to_string(u) +
                                  " outside the domain of " + phi.name);
        const double val = phi.value(u);
        if (!std::isfinite(val))
            throw DomainViolation("phi_divergence: " + phi.name + " unbounded at ratio " +
                                  std::to_string(u));
        acc += w[i] * qi * val;
    }
    return acc;
}

}  // namespace infogeo
