// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "infogeo/distribution.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/grid.hpp"

namespace infogeo {

enum class MarketKind { Lognormal, Normal, Histogram };

/// One-parameter family of market-implied densities m_sigma(x). All
/// densities are renormalized on the evaluation grid, so expectations of
/// the exact sigma-score vanish on the grid as well.
class MarketFamily {
public:
    static MarketFamily lognormal(double sigma, double anchor = 1.0) {
        if (!(sigma > 0.0) || !(anchor > 0.0))
            throw FamilyEvaluationError("lognormal family requires sigma > 0 and anchor > 0");
        MarketFamily f;
        f.kind_ = MarketKind::Lognormal;
        f.sigma_ = sigma;
        f.location_ = anchor;
        return f;
    }

    static MarketFamily normal(double sigma, double mean = 0.0) {
        if (!(sigma > 0.0)) throw FamilyEvaluationError("normal family requires sigma > 0");
        MarketFamily f;
        f.kind_ = MarketKind::Normal;
        f.sigma_ = sigma;
        f.location_ = mean;
        return f;
    }

    /// Fixed density table; carries no sigma dependence.
    static MarketFamily histogram(std::vector<double> raw_density) {
        MarketFamily f;
        f.kind_ = MarketKind::Histogram;
        f.raw_ = std::move(raw_density);
        return f;
    }

    MarketKind kind() const { return kind_; }
    double sigma() const { return sigma_; }

    Distribution density(const Grid& grid) const { return density_at(grid, sigma_); }

    Distribution density_at(const Grid& grid, double sigma) const {
        switch (kind_) {
            case MarketKind::Histogram:
                return normalize(raw_, grid);
            case MarketKind::Normal: {
                if (!(sigma > 0.0))
                    throw FamilyEvaluationError("normal family: sigma must stay positive");
                std::vector<double> log_raw(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double z = (grid.point(i) - location_) / sigma;
                    log_raw[i] = -0.5 * z * z - std::log(sigma);
                }
                return normalized_from_log(log_raw, grid);
            }
            case MarketKind::Lognormal: {
                if (!(sigma > 0.0))
                    throw FamilyEvaluationError("lognormal family: sigma must stay positive");
                std::vector<double> log_raw(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double x = grid.point(i);
                    if (!(x > 0.0))
                        throw FamilyEvaluationError("lognormal family: grid must be positive");
                    const double z = (std::log(x / location_) + 0.5 * sigma * sigma) / sigma;
                    log_raw[i] = -0.5 * z * z - std::log(x * sigma);
                }
                return normalized_from_log(log_raw, grid);
            }
        }
        throw FamilyEvaluationError("unknown market family kind");
    }

private:
    MarketKind kind_ = MarketKind::Histogram;
    double sigma_ = 0.0;
    double location_ = 0.0;
    std::vector<double> raw_;
};

}  // namespace infogeo
