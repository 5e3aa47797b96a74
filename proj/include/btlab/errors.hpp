#pragma once

#include <stdexcept>
#include <string>

namespace btlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain.
struct DomainError : Error {
    using Error::Error;
};

/// Density requested at an atom or outside the support.
struct NoDensityError : Error {
    using Error::Error;
};

/// Hazard-type quantity requested where 1 - F(x) = 0.
struct SingularityError : Error {
    using Error::Error;
};

/// The operation needs a distribution shape the input does not have
/// (e.g. atoms where a positive density is required).
struct UnsupportedShapeError : Error {
    using Error::Error;
};

/// Root bracket without a sign change.
struct BracketError : Error {
    using Error::Error;
};

/// Invalid parameters for a distribution or family constructor.
struct ConstructionError : Error {
    using Error::Error;
};

/// Requested tolerance unreachable within the evaluation budget.
/// Carries the best estimate obtained before giving up.
struct AccuracyError : Error {
    AccuracyError(const std::string& what, double value, double error)
        : Error(what), best_value(value), best_error(error) {}
    double best_value;
    double best_error;
};

}  // namespace btlab
