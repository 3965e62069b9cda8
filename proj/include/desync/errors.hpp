#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace desync {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Errors in the textual spec: syntax, binding and well-formedness problems.
class SpecError : public Error {
public:
    SpecError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class SyntaxError : public SpecError {
public:
    SyntaxError(const std::string& what, std::size_t line, std::size_t column,
                std::vector<std::string> expected)
        : SpecError(what, line, column), expected_(std::move(expected)) {}

    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::vector<std::string> expected_;
};

class UnboundVariable : public SpecError {
public:
    using SpecError::SpecError;
};

class UnguardedRecursion : public SpecError {
public:
    using SpecError::SpecError;
};

class DuplicateDefinition : public SpecError {
public:
    using SpecError::SpecError;
};

/// A plant, supervisor or requirement uses an operator outside {0, prefix, choice, variable}.
class NonRegularRole : public SpecError {
public:
    using SpecError::SpecError;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::size_t budget, std::size_t states_found)
        : Error("state budget of " + std::to_string(budget) + " exceeded (" +
                std::to_string(states_found) + " states generated)"),
          budget_(budget), states_found_(states_found) {}

    std::size_t budget() const { return budget_; }
    std::size_t states_found() const { return states_found_; }

private:
    std::size_t budget_;
    std::size_t states_found_;
};

class ElementAbsent : public Error {
public:
    using Error::Error;
};

class OverlappingLabelSets : public Error {
public:
    using Error::Error;
};

class AmbiguousDirection : public Error {
public:
    using Error::Error;
};

class NotIoProcess : public Error {
public:
    using Error::Error;
};

class MissingRequirement : public Error {
public:
    using Error::Error;
};

class NonEmptinessViolation : public Error {
public:
    using Error::Error;
};

class SizeLimit : public Error {
public:
    using Error::Error;
};

class TraceNotExecutable : public Error {
public:
    using Error::Error;
};

/// A run contradicted a guarantee the toolkit relies on (e.g. the size-independence theorem).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace desync
