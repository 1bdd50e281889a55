#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qidx
{

// Base of every error raised by the engine.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A reciprocal 1/(1 - v) was requested at v = +1 exactly.
struct PoleError : Error {
    using Error::Error;
};

// A reciprocal 1/(1 - v) with v an order-0 symbolic unit has no Laurent expansion.
struct SymbolicNonUnit : Error {
    using Error::Error;
};

// Series inversion with a non-invertible lowest coefficient.
struct NonUnitLeading : Error {
    using Error::Error;
};

// A coefficient beyond the truncation order was requested.
struct OrderExceeded : Error {
    using Error::Error;
};

// A Pochhammer argument with negative q-order.
struct NegativeOrderArgument : Error {
    using Error::Error;
};

// Parameters violate the validity constraints of a constructor or identity.
struct ConstraintViolation : Error {
    using Error::Error;
};

// The terms of a one-sided sum do not tend to infinite q-order.
struct DivergentTail : Error {
    using Error::Error;
};

struct EmptyConstraintSet : Error {
    using Error::Error;
};

struct NonIntegerResult : Error {
    using Error::Error;
};

// Symbolic unit used where only rational coefficients are available.
struct RingMismatch : Error {
    using Error::Error;
};

struct UnboundParameter : Error {
    using Error::Error;
};

struct UnknownIdentity : Error {
    using Error::Error;
};

// Parse failures carry a 1-based column; end of input is length + 1.
struct SyntaxError : Error {
    SyntaxError(const std::string &msg, std::size_t column)
        : Error(msg + " at offset " + std::to_string(column)), column(column)
    {
    }
    std::size_t column;
};

struct UnknownFunction : SyntaxError {
    using SyntaxError::SyntaxError;
};

struct ArityError : SyntaxError {
    using SyntaxError::SyntaxError;
};

} // namespace qidx
