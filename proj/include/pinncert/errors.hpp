#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pinncert {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax or identifier error while parsing an expression. Carries the byte
/// offset into the source string where the problem was detected.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Runtime evaluation failure: division by zero, unbound parameter.
class EvalError : public Error {
public:
    using Error::Error;
};

/// Invalid problem definition (bad interval, eps <= 0, c < 0, ...).
class ProblemError : public Error {
public:
    using Error::Error;
};

/// Non-finite value where a finite one is required (quadrature node, grid).
class NumericError : public Error {
public:
    using Error::Error;
};

/// Config file / CLI argument problems.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Misuse of the certificate machinery (inadmissible family, wrong trial kind).
class CertifyError : public Error {
public:
    using Error::Error;
};

/// Training diverged (non-finite loss).
class TrainError : public Error {
public:
    using Error::Error;
};

}  // namespace pinncert
