#pragma once

#include <stdexcept>
#include <string>

namespace qbm {

/// Base class for all qbm errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// A series, asymptotic expansion, or quadrature failed to reach the
/// requested tolerance within its budget.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error(what) {}
};

/// A closed-form coefficient produced an imaginary residual above the
/// certification threshold.
class RealnessError : public Error {
public:
    explicit RealnessError(const std::string& what) : Error(what) {}
};

/// 0/0-type degeneracy that the caller must disambiguate.
class IndeterminateError : public Error {
public:
    explicit IndeterminateError(const std::string& what) : Error(what) {}
};

/// Genuinely divergent pure-state Fisher-information term.
class SingularPurityError : public Error {
public:
    explicit SingularPurityError(const std::string& what) : Error(what) {}
};

/// Invalid configuration or type invariant violation. Collects every
/// violated field, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Config text could not be parsed; message carries line/key diagnostics.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

/// Malformed CSV handed to summarize().
class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what) : Error(what) {}
};

}  // namespace qbm
