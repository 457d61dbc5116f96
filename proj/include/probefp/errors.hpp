#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace probefp {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input. `position` is a byte offset for expressions and a
// 1-based line number for machine files; `kind` says which.
class ParseError : public Error {
public:
    enum class Kind { ByteOffset, Line };

    ParseError(const std::string& message, Kind kind, std::size_t position)
        : Error(message), kind_(kind), position_(position) {}

    Kind kind() const { return kind_; }
    std::size_t position() const { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

// Well-formed input that violates a semantic constraint (totality,
// reachability, sum-to-one, nonnegativity, alphabet mismatch).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Floating-point failure at a specific parameter point.
class NumericError : public Error {
public:
    NumericError(const std::string& message, double x, double y)
        : Error(message), x_(x), y_(y) {}

    double x() const { return x_; }
    double y() const { return y_; }

private:
    double x_;
    double y_;
};

class OutOfSimplexError : public NumericError {
public:
    using NumericError::NumericError;
};

// Rational function denominator vanishes (numerically) at the point.
class SingularPointError : public NumericError {
public:
    using NumericError::NumericError;
};

// Symbolic mode requires an irreducible joint chain.
class ReducibleChainError : public Error {
public:
    using Error::Error;
};

// An intermediate polynomial exceeded the term-count cap.
class SwellError : public Error {
public:
    using Error::Error;
};

}  // namespace probefp
