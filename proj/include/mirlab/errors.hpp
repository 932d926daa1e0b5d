#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mirlab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class UnsupportedVariableDomain : public Error {
public:
    using Error::Error;
};

class EnumerationTooLarge : public Error {
public:
    using Error::Error;
};

class InfeasibleProblem : public Error {
public:
    using Error::Error;
};

class UnboundedProblem : public Error {
public:
    using Error::Error;
};

class InfeasibleSolution : public Error {
public:
    using Error::Error;
};

class ContractViolation : public Error {
public:
    using Error::Error;
};

class SchemaMismatch : public Error {
public:
    using Error::Error;
};

class ExhaustedDraws : public Error {
public:
    using Error::Error;
};

class UnsupportedFeature : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace mirlab
