// SPDX-License-Identifier: MIT
#pragma once

#include "infogeo/distribution.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/geometry.hpp"
#include "infogeo/grid.hpp"
#include "infogeo/hedging.hpp"
#include "infogeo/investment.hpp"
#include "infogeo/market.hpp"
#include "infogeo/payoff.hpp"
#include "infogeo/phi.hpp"
#include "infogeo/products.hpp"
#include "infogeo/risk.hpp"
#include "infogeo/root_finding.hpp"
#include "infogeo/serialize.hpp"
#include "infogeo/utility.hpp"
#include "infogeo/views.hpp"
