#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace galg {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position()` is the 0-based character offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), message_(what), position_(position) {}

    std::size_t position() const noexcept { return position_; }
    /// The message without the position suffix.
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    std::size_t position_;
};

/// Division by an identically zero function, or evaluation at a pole.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A structural invariant of a domain object was violated at construction.
class InvariantError : public Error {
public:
    using Error::Error;
};

class NotDiffeomorphismError : public Error {
public:
    using Error::Error;
};

/// Determinant identically zero over the rational-function field.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, std::string determinant)
        : Error(what), determinant_(std::move(determinant)) {}

    const std::string& determinant() const noexcept { return determinant_; }

private:
    std::string determinant_;
};

/// Malformed or inconsistent scenario file. Line and column are 1-based,
/// or 0 when the problem is not tied to a position;
/// `block()` names the section the problem was found in.
class ScenarioError : public Error {
public:
    ScenarioError(const std::string& file, std::size_t line, std::size_t column, std::string block,
                  const std::string& what)
        : Error(file + (line ? ":" + std::to_string(line) + ":" + std::to_string(column) : std::string()) + ": [" +
                block + "] " + what),
          line_(line), column_(column), block_(std::move(block)) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& block() const noexcept { return block_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string block_;
};

} // namespace galg
