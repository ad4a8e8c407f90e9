#pragma once

#include <stdexcept>
#include <string>

namespace mutwalk {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An argument lies outside the documented domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// A generating function was evaluated exactly at a pole of its denominator.
struct PoleAtArgument : DomainError {
    using DomainError::DomainError;
};

// A truncated series hit its term cap before meeting the tolerance.
struct NonConvergence : Error {
    NonConvergence(const std::string& what, int terms)
        : Error(what), terms_used(terms) {}
    int terms_used;
};

// Gaussian elimination ran out of usable pivots (non-irreducible input).
struct SingularSystem : Error {
    using Error::Error;
};

// Every Monte Carlo trial was censored at the step cap.
struct AllCensored : Error {
    using Error::Error;
};

}  // namespace mutwalk
