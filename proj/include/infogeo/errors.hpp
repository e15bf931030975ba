// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace infogeo {

/// Base class for all engine errors. `reason()` is a stable machine tag
/// (kebab-case) that the CLI copies into the JSON "reason" field.
class Error : public std::runtime_error {
public:
    Error(std::string reason, const std::string& what)
        : std::runtime_error(what), reason_(std::move(reason)) {}

    const std::string& reason() const noexcept { return reason_; }

private:
    std::string reason_;
};

/// Inputs or state violate a precondition (grids, supports, domains, ranges).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A solver could not produce a solution (infeasible targets, iteration
/// budgets, structural degeneracies). The CLI maps these to exit code 3.
class SolverError : public Error {
public:
    using Error::Error;
};

#define INFOGEO_DEFINE_ERROR(Name, Base, tag)                        \
    class Name : public Base {                                       \
    public:                                                          \
        explicit Name(const std::string& what) : Base(tag, what) {}  \
    };

INFOGEO_DEFINE_ERROR(InvalidRange, ValidationError, "invalid-range")
INFOGEO_DEFINE_ERROR(GridMismatch, ValidationError, "grid-mismatch")
INFOGEO_DEFINE_ERROR(ZeroMass, ValidationError, "zero-mass")
INFOGEO_DEFINE_ERROR(SupportViolation, ValidationError, "support-violation")
INFOGEO_DEFINE_ERROR(DomainViolation, ValidationError, "domain-violation")
INFOGEO_DEFINE_ERROR(ZeroPrice, ValidationError, "zero-price")
INFOGEO_DEFINE_ERROR(FamilyEvaluationError, ValidationError, "family-evaluation")
INFOGEO_DEFINE_ERROR(OverflowRisk, ValidationError, "overflow-risk")
INFOGEO_DEFINE_ERROR(ZeroEvidence, ValidationError, "zero-evidence")
INFOGEO_DEFINE_ERROR(ZeroExposure, ValidationError, "zero-exposure")
INFOGEO_DEFINE_ERROR(DivisionByZero, ValidationError, "division-by-zero")

INFOGEO_DEFINE_ERROR(TargetUnreachable, SolverError, "target-unreachable")
INFOGEO_DEFINE_ERROR(Infeasible, SolverError, "infeasible")
INFOGEO_DEFINE_ERROR(MaxIterations, SolverError, "max-iterations")
INFOGEO_DEFINE_ERROR(NegativeDensity, SolverError, "negative-density")
INFOGEO_DEFINE_ERROR(SingularSystem, SolverError, "singular-system")
INFOGEO_DEFINE_ERROR(StiffProfile, SolverError, "stiff-profile")
INFOGEO_DEFINE_ERROR(BudgetInfeasible, SolverError, "budget-infeasible")

#undef INFOGEO_DEFINE_ERROR

}  // namespace infogeo
