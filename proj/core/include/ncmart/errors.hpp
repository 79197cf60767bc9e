// errors.hpp: exception types shared by every ncmart module

#pragma once

#include <stdexcept>
#include <string>

namespace ncm {

// Precondition violated by an argument value (negative p, non-self-adjoint input, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Two operands live in different algebras.
class CompositionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A certificate required by an operation did not hold (uncertified multiplier,
// non-adapted sequence, non-projection, ...).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Requested algebra exceeds the configured dimension cap.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

// A constructive procedure failed to terminate or certify.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed matrix text, config or witness file.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ncm
