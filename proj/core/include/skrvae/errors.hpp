#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skr {

// Shape disagreement between operands (both shapes are named in the message).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numeric-domain violation: ln of a non-positive value, division by zero,
// non-positive kernel spread or variance.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// API misuse: calling backward twice, non-scalar backward root,
// leave-one-out smoothing with no neighbors.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Invalid or inconsistent configuration values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure at runtime (failed Cholesky pivot, NaN loss).
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t index = 0)
        : std::runtime_error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// Malformed text input; line is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Constant input where sample statistics are undefined.
class DegenerateInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace skr
