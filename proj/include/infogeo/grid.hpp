// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "infogeo/errors.hpp"

namespace infogeo {

enum class GridScheme { Uniform, LogUniform };

/// Shared discretization of the underlying level x with trapezoid quadrature
/// weights. Immutable; copies share storage. Two grids are compatible only
/// when points and weights agree element-wise.
class Grid {
public:
    Grid() = default;

    static Grid make(double lo, double hi, std::size_t n, GridScheme scheme) {
        if (!(lo < hi) || n < 3)
            throw InvalidRange("grid requires lo < hi and n >= 3");
        if (scheme == GridScheme::LogUniform && !(lo > 0.0))
            throw InvalidRange("log-uniform grid requires lo > 0");

        std::vector<double> pts(n);
        if (scheme == GridScheme::Uniform) {
            const double h = (hi - lo) / static_cast<double>(n - 1);
            for (std::size_t i = 0; i < n; ++i) pts[i] = lo + h * static_cast<double>(i);
        } else {
            const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(n - 1);
            for (std::size_t i = 0; i < n; ++i)
                pts[i] = std::exp(std::log(lo) + step * static_cast<double>(i));
        }
        pts.front() = lo;
        pts.back() = hi;
        return from_points(std::move(pts));
    }

    /// Trapezoid weights for an arbitrary strictly increasing point set.
    static Grid from_points(std::vector<double> points) {
        const std::size_t n = points.size();
        if (n < 3) throw InvalidRange("grid requires at least 3 points");
        for (std::size_t i = 1; i < n; ++i)
            if (!(points[i] > points[i - 1]))
                throw InvalidRange("grid points must be strictly increasing");

        std::vector<double> w(n);
        w.front() = 0.5 * (points[1] - points[0]);
        for (std::size_t i = 1; i + 1 < n; ++i)
            w[i] = 0.5 * (points[i + 1] - points[i - 1]);
        w.back() = 0.5 * (points[n - 1] - points[n - 2]);

        Grid g;
        g.data_ = std::make_shared<const Data>(Data{std::move(points), std::move(w)});
        return g;
    }

    std::size_t size() const { return data_ ? data_->points.size() : 0; }
    const std::vector<double>& points() const { return data_->points; }
    const std::vector<double>& weights() const { return data_->weights; }
    double point(std::size_t i) const { return data_->points[i]; }
    double weight(std::size_t i) const { return data_->weights[i]; }

    /// Quadrature of a sampled function: sum_i w_i v_i.
    double integrate(std::span<const double> values) const {
        const auto& w = weights();
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * values[i];
        return acc;
    }

    bool compatible_with(const Grid& other) const {
        if (data_ == other.data_) return data_ != nullptr;
        if (!data_ || !other.data_) return false;
        return data_->points == other.data_->points && data_->weights == other.data_->weights;
    }

private:
    struct Data {
        std::vector<double> points;
        std::vector<double> weights;
    };
    std::shared_ptr<const Data> data_;
};

inline Grid make_grid(double lo, double hi, std::size_t n, GridScheme scheme) {
    return Grid::make(lo, hi, n, scheme);
}

inline void require_compatible(const Grid& a, const Grid& b, const char* where) {
    if (!a.compatible_with(b))
        throw GridMismatch(std::string(where) + ": grids are not identical");
}

inline void require_size(const Grid& g, std::size_t n, const char* where) {
    if (g.size() != n)
        throw GridMismatch(std::string(where) + ": vector length does not match grid");
}

}  // namespace infogeo
