#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iknot {

/// Malformed input to an operation: unknown generators, mismatched bases,
/// incompatible ideals or variances.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter outside the domain of a builder (e.g. cable parameter n < 2).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A linear system or enumeration would exceed the configured budget.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::size_t requested, std::size_t budget)
        : std::runtime_error(what + " (requested " + std::to_string(requested) + ", budget " +
                             std::to_string(budget) + ")"),
          requested_(requested), budget_(budget) {}

    std::size_t requested() const noexcept { return requested_; }
    std::size_t budget() const noexcept { return budget_; }

private:
    std::size_t requested_;
    std::size_t budget_;
};

/// `.cfk` text that does not parse; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace iknot
