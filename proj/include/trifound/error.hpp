#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trifound {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input; line is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace trifound
