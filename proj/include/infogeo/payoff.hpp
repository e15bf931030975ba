// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "infogeo/errors.hpp"
#include "infogeo/grid.hpp"

namespace infogeo {

/// Nonnegative payoff on a Grid, defined up to a positive notional.
/// Equality of products is meaningful only after unit-price normalization.
class Payoff {
public:
    Payoff(Grid grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        require_size(grid_, values_.size(), "Payoff");
        bool any = false;
        for (double v : values_) {
            if (!(v >= 0.0))
                throw DomainViolation("Payoff: values must be nonnegative and finite");
            any = any || v > 0.0;
        }
        if (!any) throw DomainViolation("Payoff: identically zero");
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    Payoff scaled(double c) const {
        if (!(c > 0.0)) throw DomainViolation("Payoff::scaled: notional must be positive");
        std::vector<double> v(values_);
        for (double& x : v) x *= c;
        return Payoff(grid_, std::move(v));
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

inline Payoff constant_payoff(const Grid& g, double level = 1.0) {
    if (!(level > 0.0)) throw DomainViolation("constant_payoff: level must be positive");
    return Payoff(g, std::vector<double>(g.size(), level));
}

inline Payoff forward_payoff(const Grid& g) {
    std::vector<double> v(g.points());
    for (double x : v)
        if (!(x >= 0.0)) throw DomainViolation("forward_payoff: grid extends below zero");
    return Payoff(g, std::move(v));
}

inline Payoff call_payoff(const Grid& g, double strike) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::max(g.point(i) - strike, 0.0);
    return Payoff(g, std::move(v));
}

inline Payoff put_payoff(const Grid& g, double strike) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::max(strike - g.point(i), 0.0);
    return Payoff(g, std::move(v));
}

inline Payoff digital_payoff(const Grid& g, double strike) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = g.point(i) > strike ? 1.0 : 0.0;
    return Payoff(g, std::move(v));
}

/// Piecewise-linear table, sampled onto the grid. Outside the table the
/// boundary values extend flat.
inline Payoff table_payoff(const Grid& g, std::span<const double> xs, std::span<const double> vals) {
    if (xs.size() != vals.size() || xs.size() < 2)
        throw InvalidRange("table_payoff: need matching x/value arrays of length >= 2");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw InvalidRange("table_payoff: table x must be strictly increasing");
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.point(i);
        if (x <= xs.front()) {
            v[i] = vals.front();
        } else if (x >= xs.back()) {
            v[i] = vals.back();
        } else {
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t k = static_cast<std::size_t>(it - xs.begin());
            const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
            v[i] = (1.0 - t) * vals[k - 1] + t * vals[k];
        }
    }
    return Payoff(g, std::move(v));
}

}  // namespace infogeo
