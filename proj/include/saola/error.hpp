#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace saola {

/// Raised for malformed input data (bad svmlight lines, inconsistent groupings, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the svmlight reader; carries the 1-based line number of the offending line.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace saola
