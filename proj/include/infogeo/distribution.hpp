// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "infogeo/errors.hpp"
#include "infogeo/grid.hpp"

namespace infogeo {

/// Densities below this floor are treated as absent mass inside logarithms.
/// The engine assumes equivalent measures; violations raise SupportViolation
/// instead of being clamped.
inline constexpr double kDensityFloor = 1e-300;

/// Tolerance on |integral - 1| accepted by the Distribution constructor.
inline constexpr double kNormalizationTol = 1e-10;

/// Nonnegative density on a Grid integrating to one. Immutable value type.
class Distribution {
public:
    Distribution(Grid grid, std::vector<double> density)
        : grid_(std::move(grid)), density_(std::move(density)) {
        require_size(grid_, density_.size(), "Distribution");
        double mass = 0.0;
        for (std::size_t i = 0; i < density_.size(); ++i) {
            if (!(density_[i] >= 0.0))
                throw DomainViolation("Distribution: density must be nonnegative and finite");
            mass += grid_.weight(i) * density_[i];
        }
        if (std::abs(mass - 1.0) > kNormalizationTol)
            throw DomainViolation("Distribution: density integrates to " + std::to_string(mass) +
                                  ", expected 1 within 1e-10");
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& density() const { return density_; }
    double operator[](std::size_t i) const { return density_[i]; }
    std::size_t size() const { return density_.size(); }

private:
    Grid grid_;
    std::vector<double> density_;
};

/// Scales a nonnegative sample vector so it integrates to one.
inline Distribution normalize(std::span<const double> raw, const Grid& grid) {
    require_size(grid, raw.size(), "normalize");
    double mass = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!(raw[i] >= 0.0))
            throw DomainViolation("normalize: raw values must be nonnegative and finite");
        mass += grid.weight(i) * raw[i];
    }
    if (!(mass > 0.0)) throw ZeroMass("normalize: raw vector carries no mass");
    std::vector<double> density(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) density[i] = raw[i] / mass;
    return Distribution(grid, std::move(density));
}

inline Distribution normalize(const std::vector<double>& raw, const Grid& grid) {
    return normalize(std::span<const double>(raw), grid);
}

/// E_p[g] with g sampled on the same grid.
inline double expectation(const Distribution& p, std::span<const double> g) {
    require_size(p.grid(), g.size(), "expectation");
    const auto& w = p.grid().weights();
    const auto& d = p.density();
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += w[i] * d[i] * g[i];
    return acc;
}

inline double expectation(const Distribution& p, const std::vector<double>& g) {
    return expectation(p, std::span<const double>(g));
}

/// Var_p[g]. Computed about the mean so constant shifts cancel exactly.
inline double variance(const Distribution& p, std::span<const double> g) {
    require_size(p.grid(), g.size(), "variance");
    const double mean = expectation(p, g);
    const auto& w = p.grid().weights();
    const auto& d = p.density();
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double c = g[i] - mean;
        acc += w[i] * d[i] * c * c;
    }
    return acc;
}

inline double variance(const Distribution& p, const std::vector<double>& g) {
    return variance(p, std::span<const double>(g));
}

/// Relative entropy D(p||q) = sum w p ln(p/q). Mass of p below the density
/// floor contributes nothing; mass of p sitting where q has none is loud.
inline double kl_divergence(const Distribution& p, const Distribution& q) {
    require_compatible(p.grid(), q.grid(), "kl_divergence");
    const auto& w = p.grid().weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = p[i];
        if (pi <= kDensityFloor) continue;
        const double qi = q[i];
        if (qi < kDensityFloor)
            throw SupportViolation("kl_divergence: q vanishes at x = " +
                                   std::to_string(p.grid().point(i)) + " where p > 0");
        acc += w[i] * pi * std::log(pi / qi);
    }
    return acc;
}

/// Logs of a strictly positive sample vector; anything at or below the
/// density floor is a support violation.
inline std::vector<double> safe_log(std::span<const double> values, const Grid& grid,
                                    const char* what) {
    require_size(grid, values.size(), "safe_log");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > kDensityFloor))
            throw SupportViolation(std::string(what) + ": value not strictly positive at x = " +
                                   std::to_string(grid.point(i)));
        out[i] = std::log(values[i]);
    }
    return out;
}

/// Normalized density proportional to exp(log_raw); evaluated with a
/// max-shift so large exponents stay representable.
inline Distribution normalized_from_log(std::span<const double> log_raw, const Grid& grid) {
    require_size(grid, log_raw.size(), "normalized_from_log");
    double shift = log_raw[0];
    for (double v : log_raw) shift = std::max(shift, v);
    std::vector<double> raw(log_raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = std::exp(log_raw[i] - shift);
    return normalize(raw, grid);
}

}  // namespace infogeo
