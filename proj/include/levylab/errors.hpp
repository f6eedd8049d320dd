#pragma once

#include <stdexcept>
#include <string>

namespace levylab {

/// Invalid model or numeric parameter (bad alpha, negative rate, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a function (e.g. xi outside (0, pi)).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested work exceeds a configured resource cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too little data for a statistically meaningful estimate.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace levylab
