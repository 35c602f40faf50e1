#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ftmm {

// Raised when a caller breaks a documented precondition (bad k, bad subset,
// n < 2f + 1, malformed function spec, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A cost function produced a non-finite value. The index is 0-based.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(std::size_t index, const std::string& what)
        : std::runtime_error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// The requested grid or partition exceeds the configured budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::uint64_t required, std::uint64_t budget, const std::string& what)
        : std::runtime_error(what), required_(required), budget_(budget) {}

    std::uint64_t required() const noexcept { return required_; }
    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t required_;
    std::uint64_t budget_;
};

// Scenario parse or validation failure. Line and column are 1-based when known.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what,
                             std::optional<std::size_t> line = std::nullopt,
                             std::optional<std::size_t> column = std::nullopt)
        : std::runtime_error(what), line_(line), column_(column) {}

    std::optional<std::size_t> line() const noexcept { return line_; }
    std::optional<std::size_t> column() const noexcept { return column_; }

private:
    std::optional<std::size_t> line_;
    std::optional<std::size_t> column_;
};

}  // namespace ftmm
