#pragma once

#include <stdexcept>
#include <string>

namespace ebconst {

/// Input outside the mathematical domain of an operation (n < 2, zero polynomial, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Instance exceeds a configured size cap.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A checked mathematical statement failed. Carries a human-readable payload
/// (typically the offending sequence) so a falsifying input can be replayed.
class InvariantFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Exhaustive search ran past its node budget before finishing.
class SearchBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (keys, polynomials, CLI arguments).
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace ebconst
