#pragma once

#include <stdexcept>
#include <string>

namespace fracheat {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A quadrature did not reach its tolerance within the node budget.
class QuadratureFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A construction search exhausted its budget without a certified witness.
/// This is inconclusive, not a refutation.
class SearchFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The preconditions of a construction cannot be met for these parameters.
class Infeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fracheat
