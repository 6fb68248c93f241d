#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace solardc {

/// An argument violates a model invariant (negative power, utilization > 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A scenario or configuration value is malformed or inconsistent.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Text input could not be parsed; carries a 1-based location.
class ParseError : public ConfigError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : ConfigError(format(what, line, column)), message_(what), line_(line), column_(column) {}

    /// The description without the location prefix.
    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::string loc = "line " + std::to_string(line);
        if (column != 0)
            loc += ", column " + std::to_string(column);
        return loc + ": " + what;
    }

    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

/// The requested sizing or plan cannot be satisfied with the given resources.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what, long min_batteries = -1)
        : std::runtime_error(what), min_batteries_(min_batteries) {}

    /// Smallest battery count that would make the plan feasible, or -1 if unknown.
    long min_batteries() const noexcept { return min_batteries_; }

private:
    long min_batteries_;
};

} // namespace solardc
