#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isoembed {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; line() is 1-based, 0 when not tied to a line.
class LoadError : public Error {
public:
    LoadError(const std::string& what, std::size_t line)
        : Error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// A zero (or numerically zero) row that cannot be normalized.
class DegenerateVectorError : public Error {
public:
    DegenerateVectorError(const std::string& what, std::size_t row)
        : Error(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Two input points coincide; indices are 1-based as reported to users.
class CoincidentPairError : public Error {
public:
    CoincidentPairError(const std::string& what, std::size_t first, std::size_t second)
        : Error(what), first_(first), second_(second) {}
    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

class InvalidInputError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

/// A precondition on the numeric content of an argument was violated.
class ContractError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Results that contradict weak duality or were built from different data.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace isoembed
