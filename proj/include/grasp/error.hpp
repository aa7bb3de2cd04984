#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grasp {

/// Base of every exception the library throws. `kind()` is a stable,
/// machine-parsable class name used by the CLI error line.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
    virtual std::string_view kind() const noexcept { return "error"; }
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error
{
public:
    using Error::Error;
    std::string_view kind() const noexcept override { return "domain_error"; }
};

/// A numerical procedure failed (factorization, convergence, degenerate fit).
class NumericalError : public Error
{
public:
    using Error::Error;
    std::string_view kind() const noexcept override { return "numerical_error"; }
};

class FactorizationError : public NumericalError
{
public:
    using NumericalError::NumericalError;
    std::string_view kind() const noexcept override { return "factorization_error"; }
};

class ConvergenceError : public NumericalError
{
public:
    using NumericalError::NumericalError;
    std::string_view kind() const noexcept override { return "convergence_error"; }
};

class DegenerateDesignError : public NumericalError
{
public:
    using NumericalError::NumericalError;
    std::string_view kind() const noexcept override { return "degenerate_design"; }
};

class InvalidProposalError : public NumericalError
{
public:
    using NumericalError::NumericalError;
    std::string_view kind() const noexcept override { return "invalid_proposal"; }
};

/// Malformed or unusable input data.
class DataError : public Error
{
public:
    using Error::Error;
    std::string_view kind() const noexcept override { return "data_error"; }
};

class ParseError : public DataError
{
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : DataError(what), row_(row), column_(column) {}
    std::string_view kind() const noexcept override { return "parse_error"; }
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

/// Bad command line or configuration.
class UsageError : public Error
{
public:
    using Error::Error;
    std::string_view kind() const noexcept override { return "usage_error"; }
};

} // namespace grasp
