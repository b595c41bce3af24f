#pragma once

#include <stdexcept>
#include <string>

namespace cmab {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Matrix or vector dimensions do not match what the operation expects.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation requested in a state that does not support it (e.g. an index
// for an arm that was never pulled).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// An exhaustive enumeration would exceed its configured size guard.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

// Invalid experiment configuration or action set that cannot be served.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Missing or inconsistent data handed to an evaluator.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cmab
