#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ofdmse {

/// Argument outside the mathematical domain of an operation (negative SNR,
/// probability outside its open interval, too few samples, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inconsistent or unsupported configuration (grid larger than the FFT,
/// unknown system name, empty allowed set, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exhaustive search refused because the search space is too large.
class SearchSpaceError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Malformed text input; carries the 1-based line number of the offending record.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace ofdmse
