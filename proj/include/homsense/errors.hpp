#pragma once

#include <stdexcept>
#include <string>

namespace homsense {

// Error hierarchy. The CLI maps each category onto a distinct exit code.

/// Shapes of the inputs do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inputs are well-formed but violate an operation's precondition
/// (k > m, unsorted input, non-positive lambda, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite input or a numerical routine that cannot produce an answer.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed CSV / JSON input.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace homsense
