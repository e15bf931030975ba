// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "infogeo/errors.hpp"
#include "infogeo/phi.hpp"

namespace infogeo {

/// Risk-averse utility over payoff levels F > 0: U' > 0 and strictly
/// decreasing. The Arrow-Pratt relative risk aversion R(F) = -F U''/U'
/// doubles as the source of U'' where needed.
struct Utility {
    std::string name;
    std::function<double(double)> value;                   // U(F)
    std::function<double(double)> marginal;                // U'(F)
    std::function<double(double)> marginal_inverse;        // U'^{-1}(v), v > 0
    std::function<double(double)> relative_risk_aversion;  // R(F)
};

/// Constant relative risk aversion: U(F) = (F^{1-R} - 1)/(1-R), with the
/// log-utility limit at R = 1.
inline Utility utility_crra(double R) {
    if (!(R > 0.0)) throw DomainViolation("utility_crra: R must be positive");
    Utility u;
    u.name = R == 1.0 ? "log" : "crra-" + std::to_string(R);
    if (R == 1.0) {
        u.value = [](double f) { return std::log(f); };
    } else {
        u.value = [R](double f) { return (std::pow(f, 1.0 - R) - 1.0) / (1.0 - R); };
    }
    u.marginal = [R](double f) { return std::pow(f, -R); };
    u.marginal_inverse = [R](double v) { return std::pow(v, -1.0 / R); };
    u.relative_risk_aversion = [R](double) { return R; };
    return u;
}

inline Utility utility_log() { return utility_crra(1.0); }

/// The divergence generator dual to a utility: phi(u) = U(1) - U(u).
/// Minimizing D_phi against the market reproduces the U-optimal investment.
inline PhiFunction phi_from_utility(const Utility& u) {
    PhiFunction p;
    p.name = "neg-" + u.name;
    const auto value = u.value;
    const auto marginal = u.marginal;
    const auto marginal_inverse = u.marginal_inverse;
    const auto rra = u.relative_risk_aversion;
    const double u1 = value(1.0);
    p.value = [value, u1](double x) { return u1 - value(x); };
    p.derivative = [marginal](double x) { return -marginal(x); };
    p.derivative_inverse = [marginal_inverse](double v) { return marginal_inverse(-v); };
    // U'' recovered from the Arrow-Pratt profile: phi'' = R(u) U'(u) / u.
    p.second_derivative = [marginal, rra](double x) { return rra(x) * marginal(x) / x; };
    p.derivative_hi = 0.0;
    return p;
}

}  // namespace infogeo
